//! Finite-dimensional complex Hilbert space over a set of documents.
//!
//! Each document (page) contributes one basis vector `e_j`. A concept state is a
//! unit vector `Σ a_j e^{iα_j} e_j`, a context is an orthogonal projector `N`
//! applied before measurement, and a word is measured with a projector `M`.
//! Everything here is exact linear algebra on explicit vectors; the aggregate
//! count-based formulas elsewhere in the crate are checked against it.
//!
//! Basis indices are zero-based.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|‖ψ‖² − 1|` for a valid state.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Entrywise tolerance for `P = P†` and `P² = P`.
pub const PROJECTOR_TOLERANCE: f64 = 1e-10;
/// Below this squared norm a projected state counts as annihilated.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-12;
/// Largest excursion outside `[0, 1]` that is still treated as round-off.
pub const HEALTH_TOLERANCE: f64 = 1e-9;
/// Largest dimension accepted for dense projectors.
pub const DENSE_MAX_DIM: usize = 64;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Validates a caller-supplied probability.
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::InvalidInput(format!(
                "probability {value} is outside [0, 1]"
            )))
        }
    }

    /// Clamps a computed value into `[0, 1]`, rejecting anything further out
    /// than [`HEALTH_TOLERANCE`].
    pub fn from_computed(raw: f64) -> Result<Self> {
        if !raw.is_finite() || !(-HEALTH_TOLERANCE..=1.0 + HEALTH_TOLERANCE).contains(&raw) {
            return Err(Error::NumericalHealth { value: raw });
        }
        Ok(Probability(raw.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 − p`.
    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `⟨a|b⟩ = Σ conj(a_j) b_j`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A unit vector in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized. Vectors off the unit
    /// sphere by more than [`NORM_TOLERANCE`] are rejected, never rescaled.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let n2 = norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > NORM_TOLERANCE || !n2.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(StateVector { amplitudes })
    }

    /// Divides by the norm. Use this only when normalizing is the intent.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let n2 = norm_sqr(&amplitudes);
        if n2 < ANNIHILATION_THRESHOLD || !n2.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        let scale = n2.sqrt().recip();
        amplitudes.iter_mut().for_each(|z| *z *= scale);
        StateVector::new(amplitudes)
    }

    /// Builds `Σ a_j e^{iα_j} e_j` from moduli and phases in radians.
    pub fn from_polar(moduli: &[f64], phases: &[f64]) -> Result<Self> {
        check_dim(moduli.len(), phases.len())?;
        StateVector::new(
            moduli
                .iter()
                .zip(phases)
                .map(|(&r, &theta)| Complex64::from_polar(r, theta))
                .collect(),
        )
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Modulus `a_j` of each amplitude.
    pub fn moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm()).collect()
    }

    /// Phase `α_j` of each amplitude in `[0, 2π)`.
    pub fn phases(&self) -> Vec<f64> {
        self.amplitudes
            .iter()
            .map(|z| z.arg().rem_euclid(std::f64::consts::TAU))
            .collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn scaled(&self, factor: Complex64) -> Vec<Complex64> {
        self.amplitudes.iter().map(|z| z * factor).collect()
    }
}

/// Projector onto the span of a subset of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetProjector {
    dim: usize,
    mask: Vec<bool>,
}

impl SubsetProjector {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(j, &on)| on.then_some(j))
    }

    pub fn contains(&self, index: usize) -> bool {
        self.mask.get(index).copied().unwrap_or(false)
    }

    pub fn rank(&self) -> usize {
        self.mask.iter().filter(|&&on| on).count()
    }
}

/// Hermitian idempotent `n × n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseProjector {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseProjector {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }
}

/// Orthogonal projector on `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    Subset(SubsetProjector),
    Dense(DenseProjector),
}

impl Projector {
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Projector::Subset(SubsetProjector {
            dim,
            mask: vec![true; dim],
        }))
    }

    pub fn subset<I: IntoIterator<Item = usize>>(dim: usize, indices: I) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut mask = vec![false; dim];
        for index in indices {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            mask[index] = true;
        }
        Ok(Projector::Subset(SubsetProjector { dim, mask }))
    }

    /// Validates a row-major matrix as an orthogonal projector.
    pub fn dense(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > DENSE_MAX_DIM {
            return Err(Error::DenseTooLarge {
                dim,
                max: DENSE_MAX_DIM,
            });
        }
        check_dim(dim * dim, entries.len())?;
        let at = |r: usize, c: usize| entries[r * dim + c];
        let mut deviation: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                deviation = deviation.max((at(r, c) - at(c, r).conj()).norm());
                let square: Complex64 = (0..dim).map(|k| at(r, k) * at(k, c)).sum();
                deviation = deviation.max((square - at(r, c)).norm());
            }
        }
        if deviation > PROJECTOR_TOLERANCE {
            return Err(Error::NotAProjector { deviation });
        }
        Ok(Projector::Dense(DenseProjector { dim, entries }))
    }

    /// Projector onto the span of the given vectors (Gram–Schmidt).
    pub fn onto_span(dim: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in vectors {
            check_dim(dim, v.len())?;
            let mut w = v.clone();
            // two passes keep the basis orthogonal to round-off
            for _ in 0..2 {
                for u in &basis {
                    let overlap = inner(u, &w);
                    w.iter_mut().zip(u).for_each(|(wi, ui)| *wi -= overlap * ui);
                }
            }
            let n2 = norm_sqr(&w);
            if n2 > 1e-20 {
                let s = n2.sqrt().recip();
                w.iter_mut().for_each(|z| *z *= s);
                basis.push(w);
            }
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for u in &basis {
            for r in 0..dim {
                for c in 0..dim {
                    entries[r * dim + c] += u[r] * u[c].conj();
                }
            }
        }
        Projector::dense(dim, entries)
    }

    pub fn dim(&self) -> usize {
        match self {
            Projector::Subset(p) => p.dim,
            Projector::Dense(p) => p.dim,
        }
    }

    /// `I − P`.
    pub fn complement(&self) -> Self {
        match self {
            Projector::Subset(p) => Projector::Subset(SubsetProjector {
                dim: p.dim,
                mask: p.mask.iter().map(|on| !on).collect(),
            }),
            Projector::Dense(p) => {
                let mut entries: Vec<Complex64> = p.entries.iter().map(|z| -z).collect();
                for k in 0..p.dim {
                    entries[k * p.dim + k] += Complex64::new(1.0, 0.0);
                }
                Projector::Dense(DenseProjector {
                    dim: p.dim,
                    entries,
                })
            }
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.dim(), v.len())?;
        Ok(match self {
            Projector::Subset(p) => v
                .iter()
                .zip(&p.mask)
                .map(|(&z, &on)| if on { z } else { Complex64::new(0.0, 0.0) })
                .collect(),
            Projector::Dense(p) => (0..p.dim)
                .map(|r| (0..p.dim).map(|c| p.entry(r, c) * v[c]).sum())
                .collect(),
        })
    }

    /// `⟨a|P|b⟩`.
    pub fn matrix_element(&self, a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
        check_dim(self.dim(), a.len())?;
        Ok(inner(a, &self.apply(b)?))
    }

    /// Whether `PQ = QP` within [`PROJECTOR_TOLERANCE`].
    pub fn commutes_with(&self, other: &Projector) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        if let (Projector::Subset(_), Projector::Subset(_)) = (self, other) {
            return Ok(true);
        }
        let dim = self.dim();
        for k in 0..dim {
            let e = StateVector::basis(dim, k)?;
            let pq = self.apply(&other.apply(e.amplitudes())?)?;
            let qp = other.apply(&self.apply(e.amplitudes())?)?;
            if pq
                .iter()
                .zip(&qp)
                .any(|(x, y)| (x - y).norm() > PROJECTOR_TOLERANCE)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Born rule: `⟨ψ|M|ψ⟩`.
pub fn born_probability(psi: &StateVector, m: &Projector) -> Result<Probability> {
    let value = m.matrix_element(psi.amplitudes(), psi.amplitudes())?;
    Probability::from_computed(value.re)
}

/// `N|ψ⟩ / ‖N|ψ⟩‖`.
pub fn apply_context(psi: &StateVector, context: &Projector) -> Result<StateVector> {
    let projected = context.apply(psi.amplitudes())?;
    let n2 = norm_sqr(&projected);
    if n2 < ANNIHILATION_THRESHOLD {
        return Err(Error::AnnihilatedState { norm_sqr: n2 });
    }
    StateVector::normalized(projected)
}

/// `⟨ψ|N M N|ψ⟩ / ⟨ψ|N|ψ⟩`, the probability of measuring `M` after context `N`.
pub fn mu_with_context(
    psi: &StateVector,
    context: &Projector,
    m: &Projector,
) -> Result<Probability> {
    check_dim(context.dim(), m.dim())?;
    let projected = context.apply(psi.amplitudes())?;
    let survival = norm_sqr(&projected);
    if survival < ANNIHILATION_THRESHOLD {
        return Err(Error::AnnihilatedState { norm_sqr: survival });
    }
    let numerator = m.matrix_element(&projected, &projected)?.re;
    Probability::from_computed(numerator / survival)
}

/// `(ψ_A + ψ_B) / ‖ψ_A + ψ_B‖`, equal weights.
pub fn superpose(psi_a: &StateVector, psi_b: &StateVector) -> Result<StateVector> {
    check_dim(psi_a.dim(), psi_b.dim())?;
    let sum: Vec<Complex64> = psi_a
        .amplitudes()
        .iter()
        .zip(psi_b.amplitudes())
        .map(|(a, b)| a + b)
        .collect();
    if norm_sqr(&sum) < ANNIHILATION_THRESHOLD {
        return Err(Error::DegenerateSuperposition);
    }
    StateVector::normalized(sum)
}

/// Uniform-modulus state over `indices` with per-index phases:
/// `(1/√|J|) Σ_{j∈J} e^{iα_j} e_j`.
pub fn characteristic_state<F>(dim: usize, indices: &[usize], phase: F) -> Result<StateVector>
where
    F: Fn(usize) -> f64,
{
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let support: BTreeSet<usize> = indices.iter().copied().collect();
    if support.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&index) = support.iter().find(|&&j| j >= dim) {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let modulus = (support.len() as f64).sqrt().recip();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for &j in &support {
        amplitudes[j] = Complex64::from_polar(modulus, phase(j));
    }
    StateVector::new(amplitudes)
}

/// Term-by-term evaluation of
/// `[⟨A|NMN|A⟩ + ⟨B|NMN|B⟩ + 2Re⟨A|NMN|B⟩] / [⟨A|N|A⟩ + ⟨B|N|B⟩ + 2Re⟨A|N|B⟩]`.
///
/// Uses `⟨A|NMN|A⟩ = p_A μ(A)` so it stays defined when one state alone is
/// annihilated by the context.
pub fn mu_combined_expansion(
    psi_a: &StateVector,
    psi_b: &StateVector,
    context: &Projector,
    m: &Projector,
) -> Result<Probability> {
    check_dim(psi_a.dim(), psi_b.dim())?;
    check_dim(context.dim(), m.dim())?;
    let na = context.apply(psi_a.amplitudes())?;
    let nb = context.apply(psi_b.amplitudes())?;

    let weighted_a = m.matrix_element(&na, &na)?.re;
    let weighted_b = m.matrix_element(&nb, &nb)?.re;
    let cross_m = m.matrix_element(&na, &nb)?.re;
    let p_a = inner(psi_a.amplitudes(), &na).re;
    let p_b = inner(psi_b.amplitudes(), &nb).re;
    let cross_n = inner(psi_a.amplitudes(), &nb).re;

    let sum_norm = (2.0 + 2.0 * psi_a.inner(psi_b).re).max(0.0);
    if sum_norm < ANNIHILATION_THRESHOLD {
        return Err(Error::DegenerateSuperposition);
    }
    let denominator = p_a + p_b + 2.0 * cross_n;
    if denominator < ANNIHILATION_THRESHOLD * sum_norm {
        return Err(Error::AnnihilatedState {
            norm_sqr: denominator / sum_norm,
        });
    }
    Probability::from_computed((weighted_a + weighted_b + 2.0 * cross_m) / denominator)
}

/// `μ(AB)` for the superposed state, computed both directly and through the
/// explicit interference expansion. Returns the direct value; the two routes
/// must agree within [`HEALTH_TOLERANCE`].
pub fn mu_combined_oracle(
    psi_a: &StateVector,
    psi_b: &StateVector,
    context: &Projector,
    m: &Projector,
) -> Result<Probability> {
    let direct = mu_with_context(&superpose(psi_a, psi_b)?, context, m)?;
    let expansion = mu_combined_expansion(psi_a, psi_b, context, m)?;
    if (direct.value() - expansion.value()).abs() > HEALTH_TOLERANCE {
        return Err(Error::OracleDisagreement {
            direct: direct.value(),
            expansion: expansion.value(),
        });
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn born_on_eigenstate_and_orthogonal() {
        let e0 = StateVector::basis(4, 0).unwrap();
        let m0 = Projector::subset(4, [0]).unwrap();
        let m12 = Projector::subset(4, [1, 2]).unwrap();
        assert_eq!(born_probability(&e0, &m0).unwrap().value(), 1.0);
        assert_eq!(born_probability(&e0, &m12).unwrap().value(), 0.0);
    }

    #[test]
    fn born_on_uniform_characteristic_state() {
        let chi = characteristic_state(8, &[0, 1, 2, 3], |_| 0.0).unwrap();
        let m = Projector::subset(8, [0, 1]).unwrap();
        assert!((born_probability(&chi, &m).unwrap().value() - 0.5).abs() < 1e-15);

        let uniform = characteristic_state(8, &(0..8).collect::<Vec<_>>(), |_| 0.0).unwrap();
        let half = Projector::subset(8, 0..4).unwrap();
        assert!((born_probability(&uniform, &half).unwrap().value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_rejects_dimension_mismatch() {
        let e0 = StateVector::basis(4, 0).unwrap();
        let m = Projector::subset(3, [0]).unwrap();
        assert_eq!(
            born_probability(&e0, &m),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 4
            })
        );
    }

    #[test]
    fn context_identity_projection_and_annihilation() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        let id = Projector::identity(2).unwrap();
        let n0 = Projector::subset(2, [0]).unwrap();
        assert_eq!(apply_context(&e0, &id).unwrap(), e0);

        let plus = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!(close(&apply_context(&plus, &n0).unwrap(), &e0, 1e-15));
        assert!(matches!(
            apply_context(&e1, &n0),
            Err(Error::AnnihilatedState { .. })
        ));
    }

    #[test]
    fn mu_with_context_examples() {
        let e0 = StateVector::basis(3, 0).unwrap();
        let id = Projector::identity(3).unwrap();
        let m0 = Projector::subset(3, [0]).unwrap();
        assert_eq!(mu_with_context(&e0, &id, &m0).unwrap().value(), 1.0);

        let s = 3f64.sqrt().recip();
        let psi = StateVector::new(vec![c(s, 0.0); 3]).unwrap();
        let n01 = Projector::subset(3, [0, 1]).unwrap();
        assert!((mu_with_context(&psi, &n01, &m0).unwrap().value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn superpose_examples() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        assert!(close(&superpose(&e0, &e0).unwrap(), &e0, 1e-15));
        let plus = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert!(close(&superpose(&e0, &e1).unwrap(), &plus, 1e-15));
        let minus = StateVector::new(vec![c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(superpose(&e0, &minus), Err(Error::DegenerateSuperposition));
    }

    #[test]
    fn characteristic_state_examples() {
        let chi = characteristic_state(4, &[0], |_| 0.0).unwrap();
        assert_eq!(chi, StateVector::basis(4, 0).unwrap());

        let chi = characteristic_state(4, &[0, 1], |j| if j == 1 { PI } else { 0.0 }).unwrap();
        let expected = StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        assert!(close(&chi, &expected, 1e-15));
        assert!((chi.phases()[1] - PI).abs() < 1e-15);

        assert_eq!(
            characteristic_state(4, &[], |_| 0.0),
            Err(Error::EmptyIndexSet)
        );
        assert_eq!(
            characteristic_state(4, &[4], |_| 0.0),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        );
    }

    #[test]
    fn combined_examples() {
        let e0 = StateVector::basis(2, 0).unwrap();
        let e1 = StateVector::basis(2, 1).unwrap();
        let id = Projector::identity(2).unwrap();
        let m0 = Projector::subset(2, [0]).unwrap();
        assert!((mu_combined_oracle(&e0, &e0, &id, &m0).unwrap().value() - 1.0).abs() < 1e-15);
        assert!((mu_combined_oracle(&e0, &e1, &id, &m0).unwrap().value() - 0.5).abs() < 1e-15);
        assert!((mu_combined_expansion(&e0, &e1, &id, &m0).unwrap().value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn state_construction_rejects_unnormalized() {
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(1e-6, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(StateVector::new(vec![]), Err(Error::ZeroDimension));
    }

    #[test]
    fn dense_projector_validation() {
        let half = c(0.5, 0.0);
        let p = Projector::dense(2, vec![half, half, half, half]).unwrap();
        let e0 = StateVector::basis(2, 0).unwrap();
        assert!((born_probability(&e0, &p).unwrap().value() - 0.5).abs() < 1e-15);
        assert!(matches!(
            Projector::dense(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::NotAProjector { .. })
        ));
        assert!(matches!(
            Projector::dense(65, vec![c(0.0, 0.0); 65 * 65]),
            Err(Error::DenseTooLarge { .. })
        ));
    }

    #[test]
    fn complement_and_commutation() {
        let p = Projector::onto_span(2, &[vec![c(1.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let q = p.complement();
        let e0 = StateVector::basis(2, 0).unwrap();
        let sum =
            born_probability(&e0, &p).unwrap().value() + born_probability(&e0, &q).unwrap().value();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!(p.commutes_with(&q).unwrap());
        let m0 = Projector::subset(2, [0]).unwrap();
        assert!(!p.commutes_with(&m0).unwrap());
    }

    #[test]
    fn probability_clamping() {
        assert_eq!(
            Probability::from_computed(1.0 + 1e-12).unwrap().value(),
            1.0
        );
        assert_eq!(Probability::from_computed(-1e-12).unwrap().value(), 0.0);
        assert!(matches!(
            Probability::from_computed(1.0 + 1e-6),
            Err(Error::NumericalHealth { .. })
        ));
        assert!(Probability::new(1.5).is_err());
    }
}
