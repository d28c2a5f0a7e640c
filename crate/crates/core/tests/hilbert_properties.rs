use num_complex::Complex64;
use proptest::prelude::*;

use qweb::context::{decompose_states, mu_ab_full};
use qweb::hilbert::{
    apply_context, born_probability, characteristic_state, inner, mu_combined_expansion,
    mu_combined_oracle, mu_with_context, superpose, Projector, StateVector,
};

fn amplitudes(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_map(|v| {
        v.into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    amplitudes(dim)
        .prop_filter("non-zero", |v| inner(v, v).re > 1e-3)
        .prop_map(|v| StateVector::normalized(v).unwrap())
}

fn mask(dim: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), dim)
}

fn subset(dim: usize, mask: &[bool]) -> Projector {
    Projector::subset(dim, (0..dim).filter(|&j| mask[j])).unwrap()
}

/// Two states, a context and a word projector on a shared space.
fn setup() -> impl Strategy<Value = (StateVector, StateVector, Projector, Projector)> {
    (2usize..=8).prop_flat_map(|dim| {
        (state(dim), state(dim), mask(dim), mask(dim))
            .prop_map(move |(a, b, n, m)| (a, b, subset(dim, &n), subset(dim, &m)))
    })
}

fn conditioned(a: &StateVector, b: &StateVector, n: &Projector) -> bool {
    let na = n.apply(a.amplitudes()).unwrap();
    let nb = n.apply(b.amplitudes()).unwrap();
    let sum: Vec<Complex64> = na.iter().zip(&nb).map(|(x, y)| x + y).collect();
    inner(&na, &na).re > 1e-3
        && inner(&nb, &nb).re > 1e-3
        && inner(&sum, &sum).re > 1e-3
        && 1.0 + a.inner(b).re > 1e-3
}

proptest! {
    #[test]
    fn normalized_states_have_unit_norm(v in amplitudes(6).prop_filter("non-zero", |v| inner(v, v).re > 1e-6)) {
        let psi = StateVector::normalized(v).unwrap();
        prop_assert!((psi.inner(&psi).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subset_projectors_are_idempotent(m in mask(6), psi in state(6)) {
        let p = subset(6, &m);
        let once = p.apply(psi.amplitudes()).unwrap();
        let twice = p.apply(&once).unwrap();
        for (x, y) in once.iter().zip(&twice) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn dense_span_projectors_are_idempotent(vectors in prop::collection::vec(amplitudes(4), 1..3), psi in state(4)) {
        let Ok(p) = Projector::onto_span(4, &vectors) else { return Ok(()) };
        let once = p.apply(psi.amplitudes()).unwrap();
        let twice = p.apply(&once).unwrap();
        for (x, y) in once.iter().zip(&twice) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn born_probability_splits_over_complement(m in mask(6), psi in state(6)) {
        let p = subset(6, &m);
        let inside = born_probability(&psi, &p).unwrap().value();
        let outside = born_probability(&psi, &p.complement()).unwrap().value();
        prop_assert!((inside + outside - 1.0).abs() < 1e-12);
    }

    #[test]
    fn context_projection_is_normalized((a, _b, n, _m) in setup()) {
        let na = n.apply(a.amplitudes()).unwrap();
        prop_assume!(inner(&na, &na).re > 1e-6);
        let projected = apply_context(&a, &n).unwrap();
        prop_assert!((projected.inner(&projected).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_agrees_with_direct_route((a, b, n, m) in setup()) {
        prop_assume!(conditioned(&a, &b, &n));
        let direct = mu_with_context(&superpose(&a, &b).unwrap(), &n, &m).unwrap().value();
        let expansion = mu_combined_expansion(&a, &b, &n, &m).unwrap().value();
        prop_assert!((direct - expansion).abs() < 1e-12, "{} vs {}", direct, expansion);
    }

    #[test]
    fn decomposed_model_matches_direct_route((a, b, n, m) in setup()) {
        prop_assume!(conditioned(&a, &b, &n));
        let direct = mu_combined_oracle(&a, &b, &n, &m).unwrap().value();
        let (mu_a, mu_b, params) = decompose_states(&a, &b, &n, &m).unwrap();
        let model = mu_ab_full(mu_a.value(), mu_b.value(), &params).unwrap().value();
        prop_assert!((direct - model).abs() < 1e-10, "{} vs {}", direct, model);
    }

    #[test]
    fn preserved_states_give_average_form(dim in 2usize..=8, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let support: Vec<usize> = (0..dim).filter(|_| rng.gen_bool(0.6)).collect();
        prop_assume!(!support.is_empty());
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for &j in &support {
                v[j] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            v
        };
        let (va, vb) = (draw(&mut rng), draw(&mut rng));
        prop_assume!(inner(&va, &va).re > 1e-3 && inner(&vb, &vb).re > 1e-3);
        let (a, b) = (StateVector::normalized(va).unwrap(), StateVector::normalized(vb).unwrap());
        prop_assume!(1.0 + a.inner(&b).re > 1e-3);
        let n = Projector::subset(dim, support.iter().copied()).unwrap();
        let m = Projector::subset(dim, (0..dim).filter(|_| rng.gen_bool(0.5))).unwrap();
        let mu = |psi: &StateVector| born_probability(psi, &m).unwrap().value();
        let cross = m.matrix_element(a.amplitudes(), b.amplitudes()).unwrap().re;
        let expected = (0.5 * (mu(&a) + mu(&b)) + cross) / (1.0 + a.inner(&b).re);
        let got = mu_combined_oracle(&a, &b, &n, &m).unwrap().value();
        prop_assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn characteristic_states_are_uniform(dim in 1usize..=12, m in mask(12), phase in 0.0f64..std::f64::consts::TAU) {
        let indices: Vec<usize> = (0..dim).filter(|&j| m[j]).collect();
        prop_assume!(!indices.is_empty());
        let psi = characteristic_state(dim, &indices, |j| phase * j as f64).unwrap();
        let expected = (indices.len() as f64).sqrt().recip();
        for (j, r) in psi.moduli().into_iter().enumerate() {
            let want = if indices.contains(&j) { expected } else { 0.0 };
            prop_assert!((r - want).abs() < 1e-12);
        }
    }
}

#[test]
fn orthogonal_states_give_plain_average() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = StateVector::new(vec![
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .unwrap();
    let b = StateVector::new(vec![
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .unwrap();
    let n = Projector::subset(3, [0, 1]).unwrap();
    let m = Projector::subset(3, [0]).unwrap();
    let cross = m.matrix_element(a.amplitudes(), b.amplitudes()).unwrap().re;
    let expected = 0.5 * (0.5 + 0.5) + cross;
    let got = mu_combined_oracle(&a, &b, &n, &m).unwrap().value();
    assert!((got - expected).abs() < 1e-12);
    assert!((got - 1.0).abs() < 1e-12);
}
