//! Context plus interference.
//!
//! When the context projector `N` commutes with the word projector `M`, the
//! space splits into `MN`, `(I − M)N` and `I − N`. Writing each concept state
//! in that split, the combined probability depends only on
//!
//! * `p_A`, `p_B`: how much of each state survives the context,
//! * `μ(A)`, `μ(B)`: the individual probabilities after the context,
//! * `c e^{iφ}` and `c′ e^{iφ′}`: overlaps of the two states inside `MN` and
//!   inside `(I − M)N`, with the component phases folded into `φ`, `φ′`.
//!
//! ```text
//!            p_A μ(A) + p_B μ(B) + 2√(p_A p_B) √(μ(A)μ(B)) c cos φ
//! μ(AB) = ───────────────────────────────────────────────────────────────────
//!         p_A + p_B + 2√(p_A p_B) [√(μ(A)μ(B)) c cos φ + √(μ̄(A)μ̄(B)) c′ cos φ′]
//! ```
//!
//! `μ(AB)` is non-increasing in `x′ = cos φ′` and non-decreasing in
//! `x = cos φ`, which is what the fitting routines rely on.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{inner, Probability, Projector, StateVector, ANNIHILATION_THRESHOLD};
use crate::interference::InterferenceInterval;

const DENOMINATOR_FLOOR: f64 = 1e-12;
/// Bisection stops once `|μ − target|` is below this.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const BISECTION_MAX_ITERATIONS: usize = 200;
/// Largest residual a fit may report.
pub const FIT_RESIDUAL_LIMIT: f64 = 1e-9;

fn check_unit(value: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} = {value} outside [0, 1]"
        )))
    }
}

fn check_weight(value: f64, name: &str) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} = {value} outside (0, 1]"
        )))
    }
}

fn check_cosine(value: f64, name: &str) -> Result<()> {
    if (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} = {value} outside [-1, 1]"
        )))
    }
}

/// Context-survival probabilities and overlap moduli; everything but the phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextWeights {
    pub p_a: f64,
    pub p_b: f64,
    pub c: f64,
    pub c_prime: f64,
}

impl ContextWeights {
    pub fn new(p_a: f64, p_b: f64, c: f64, c_prime: f64) -> Result<Self> {
        check_weight(p_a, "p_a")?;
        check_weight(p_b, "p_b")?;
        check_unit(c, "c")?;
        check_unit(c_prime, "c_prime")?;
        Ok(ContextWeights {
            p_a,
            p_b,
            c,
            c_prime,
        })
    }
}

/// `p_A = p_B = c = c′ = 0.5`, the setting used for the Olive and Lentils
/// exemplars.
impl Default for ContextWeights {
    fn default() -> Self {
        ContextWeights {
            p_a: 0.5,
            p_b: 0.5,
            c: 0.5,
            c_prime: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p_a: f64,
    pub p_b: f64,
    pub c: f64,
    pub c_prime: f64,
    pub phi: f64,
    pub phi_prime: f64,
}

impl ModelParams {
    /// Validates bounds and reduces both angles into `[0, 2π)`.
    pub fn new(p_a: f64, p_b: f64, c: f64, c_prime: f64, phi: f64, phi_prime: f64) -> Result<Self> {
        let w = ContextWeights::new(p_a, p_b, c, c_prime)?;
        Ok(ModelParams::with_angles(w, phi, phi_prime))
    }

    pub fn with_angles(weights: ContextWeights, phi: f64, phi_prime: f64) -> Self {
        ModelParams {
            p_a: weights.p_a,
            p_b: weights.p_b,
            c: weights.c,
            c_prime: weights.c_prime,
            phi: phi.rem_euclid(TAU),
            phi_prime: phi_prime.rem_euclid(TAU),
        }
    }

    pub fn weights(&self) -> ContextWeights {
        ContextWeights {
            p_a: self.p_a,
            p_b: self.p_b,
            c: self.c,
            c_prime: self.c_prime,
        }
    }
}

/// `μ(AB)` as a function of the cosines `x = cos φ`, `x′ = cos φ′`.
pub fn mu_ab_cosines(
    mu_a: f64,
    mu_b: f64,
    weights: &ContextWeights,
    x: f64,
    x_prime: f64,
) -> Result<Probability> {
    check_unit(mu_a, "mu_a")?;
    check_unit(mu_b, "mu_b")?;
    check_cosine(x, "cos phi")?;
    check_cosine(x_prime, "cos phi_prime")?;
    let ContextWeights {
        p_a,
        p_b,
        c,
        c_prime,
    } = *weights;
    let coupling = 2.0 * (p_a * p_b).sqrt();
    let inside = (mu_a * mu_b).sqrt() * c * x;
    let outside = ((1.0 - mu_a) * (1.0 - mu_b)).sqrt() * c_prime * x_prime;
    let numerator = p_a * mu_a + p_b * mu_b + coupling * inside;
    let denominator = p_a + p_b + coupling * (inside + outside);
    if denominator <= DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { value: denominator });
    }
    Probability::from_computed(numerator / denominator)
}

pub fn mu_ab_full(mu_a: f64, mu_b: f64, params: &ModelParams) -> Result<Probability> {
    mu_ab_cosines(
        mu_a,
        mu_b,
        &params.weights(),
        params.phi.cos(),
        params.phi_prime.cos(),
    )
}

/// `(p_a μ(A) + p_b μ(B)) / (p_a + p_b)`.
pub fn mu_ab_convex(mu_a: f64, mu_b: f64, p_a: f64, p_b: f64) -> Result<Probability> {
    check_unit(mu_a, "mu_a")?;
    check_unit(mu_b, "mu_b")?;
    if p_a < 0.0 || p_b < 0.0 {
        return Err(Error::InvalidInput("weights must be non-negative".into()));
    }
    let total = p_a + p_b;
    if total <= DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { value: total });
    }
    Probability::from_computed((p_a * mu_a + p_b * mu_b) / total)
}

/// Range of `μ(AB)` over all phases for fixed weights: `[μ(−1, 1), μ(1, −1)]`.
pub fn context_interval(
    mu_a: f64,
    mu_b: f64,
    weights: &ContextWeights,
) -> Result<InterferenceInterval> {
    InterferenceInterval::new(
        mu_ab_cosines(mu_a, mu_b, weights, -1.0, 1.0)?,
        mu_ab_cosines(mu_a, mu_b, weights, 1.0, -1.0)?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitStrategy {
    /// Target between `μ(A)` and `μ(B)`: context alone, no interference.
    ConvexNoInterference,
    /// Target below both.
    UnderextensionBranch,
    /// Target above both.
    OverextensionBranch,
    /// Caller-fixed weights; only the phases are solved for.
    FixedWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub params: ModelParams,
    pub residual: f64,
    pub strategy: FitStrategy,
}

/// `(p_a, p_b)` with the given ratio `p_a/p_b = num/den`, scaled so the larger is 1.
fn normalized_pair(num: f64, den: f64) -> (f64, f64) {
    let scale = num.max(den);
    (num / scale, den / scale)
}

/// Finds `t ∈ [lo, hi]` with `f(t) = target` for non-decreasing `f`.
fn bisect_increasing<F>(f: F, mut lo: f64, mut hi: f64, target: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if (f_lo - target).abs() <= BISECTION_TOLERANCE {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= BISECTION_TOLERANCE {
        return Ok(hi);
    }
    if !(f_lo..=f_hi).contains(&target) {
        return Err(Error::UnreachableTarget {
            target,
            lo: f_lo,
            hi: f_hi,
        });
    }
    let mut best = (f64::INFINITY, lo);
    for _ in 0..BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let value = f(mid)?;
        let gap = value - target;
        if gap.abs() < best.0 {
            best = (gap.abs(), mid);
        }
        if gap.abs() <= BISECTION_TOLERANCE || mid == lo || mid == hi {
            break;
        }
        if gap < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.1)
}

fn finish(
    mu_a: f64,
    mu_b: f64,
    params: ModelParams,
    target: f64,
    strategy: FitStrategy,
) -> Result<FitResult> {
    let residual = (mu_ab_full(mu_a, mu_b, &params)?.value() - target).abs();
    Ok(FitResult {
        params,
        residual,
        strategy,
    })
}

/// Finds one parameter set reproducing `target`.
///
/// * Between `μ(A)` and `μ(B)`: no interference (`c = c′ = 0`,
///   `φ = φ′ = π/2`) and `p_A/p_B = (μ(B) − t)/(t − μ(A))`.
/// * Above both: `c = c′ = 1`, `φ = π/2`, `p_A/p_B = μ̄(B)/μ̄(A)`, then `cos φ′`
///   is bisected on `[−1, 0]`. At `cos φ′ = 0` the value is a convex
///   combination (≤ max) and at `−1` it is exactly 1.
/// * Below both: `c = c′ = 1`, `φ′ = π/2`, `p_A/p_B = μ(B)/μ(A)`, then `cos φ`
///   is bisected on `[−1, 0]`, running from exactly 0 up to a convex
///   combination (≥ min).
///
/// Targets 0 and 1 are the closed-form ends of the last two branches.
pub fn fit_params(mu_a: f64, mu_b: f64, target: f64) -> Result<FitResult> {
    for (value, name) in [(mu_a, "mu_a"), (mu_b, "mu_b")] {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::InvalidInput(format!(
                "{name} = {value} must lie in (0, 1)"
            )));
        }
    }
    check_unit(target, "target")?;
    let (lo, hi) = (mu_a.min(mu_b), mu_a.max(mu_b));

    if (lo < target && target < hi) || (mu_a == mu_b && mu_a == target) {
        let (p_a, p_b) = if mu_a == mu_b {
            (1.0, 1.0)
        } else {
            normalized_pair((mu_b - target).abs(), (target - mu_a).abs())
        };
        let params = ModelParams::new(p_a, p_b, 0.0, 0.0, FRAC_PI_2, FRAC_PI_2)?;
        return finish(
            mu_a,
            mu_b,
            params,
            target,
            FitStrategy::ConvexNoInterference,
        );
    }

    if target >= hi {
        let (p_a, p_b) = normalized_pair(1.0 - mu_b, 1.0 - mu_a);
        let weights = ContextWeights::new(p_a, p_b, 1.0, 1.0)?;
        let x_prime = if target == 1.0 {
            -1.0
        } else {
            // increasing in −x′, so bisect on s = −x′ ∈ [0, 1]
            let s = bisect_increasing(
                |s| Ok(mu_ab_cosines(mu_a, mu_b, &weights, 0.0, -s)?.value()),
                0.0,
                1.0,
                target,
            )?;
            -s
        };
        let params = ModelParams::with_angles(weights, FRAC_PI_2, x_prime.acos());
        return finish(mu_a, mu_b, params, target, FitStrategy::OverextensionBranch);
    }

    let (p_a, p_b) = normalized_pair(mu_b, mu_a);
    let weights = ContextWeights::new(p_a, p_b, 1.0, 1.0)?;
    let x = if target == 0.0 {
        -1.0
    } else {
        bisect_increasing(
            |x| Ok(mu_ab_cosines(mu_a, mu_b, &weights, x, 0.0)?.value()),
            -1.0,
            0.0,
            target,
        )?
    };
    let params = ModelParams::with_angles(weights, x.acos(), FRAC_PI_2);
    finish(
        mu_a,
        mu_b,
        params,
        target,
        FitStrategy::UnderextensionBranch,
    )
}

/// Solves for the phases only, with caller-supplied weights.
///
/// Walks the path `(x, x′)`: `(−1, 1) → (−1, −1) → (1, −1)`, along which
/// `μ(AB)` is non-decreasing from the bottom to the top of
/// [`context_interval`], and bisects on the path parameter.
pub fn fit_phases(
    mu_a: f64,
    mu_b: f64,
    weights: &ContextWeights,
    target: f64,
) -> Result<FitResult> {
    check_unit(target, "target")?;
    let point = |t: f64| {
        if t <= 1.0 {
            (-1.0, 1.0 - 2.0 * t)
        } else {
            ((2.0 * (t - 1.0) - 1.0).min(1.0), -1.0)
        }
    };
    let t = bisect_increasing(
        |t| {
            let (x, x_prime) = point(t);
            Ok(mu_ab_cosines(mu_a, mu_b, weights, x, x_prime)?.value())
        },
        0.0,
        2.0,
        target,
    )?;
    let (x, x_prime) = point(t);
    let params = ModelParams::with_angles(*weights, x.acos(), x_prime.acos());
    finish(mu_a, mu_b, params, target, FitStrategy::FixedWeights)
}

/// Reads `μ(A)`, `μ(B)` and the six model parameters off explicit states,
/// for a context `N` that commutes with the word projector `M`.
pub fn decompose_states(
    psi_a: &StateVector,
    psi_b: &StateVector,
    context: &Projector,
    m: &Projector,
) -> Result<(Probability, Probability, ModelParams)> {
    if !context.commutes_with(m)? {
        return Err(Error::IncompatibleProjectors);
    }
    let outside = m.complement();
    let split = |psi: &StateVector| -> Result<(Vec<_>, Vec<_>)> {
        let n_psi = context.apply(psi.amplitudes())?;
        Ok((m.apply(&n_psi)?, outside.apply(&n_psi)?))
    };
    let (in_a, out_a) = split(psi_a)?;
    let (in_b, out_b) = split(psi_b)?;
    let sq = |v: &[_]| inner(v, v).re;
    let (a2, a2_out, b2, b2_out) = (sq(&in_a), sq(&out_a), sq(&in_b), sq(&out_b));
    let (p_a, p_b) = (a2 + a2_out, b2 + b2_out);
    for p in [p_a, p_b] {
        if p < ANNIHILATION_THRESHOLD {
            return Err(Error::AnnihilatedState { norm_sqr: p });
        }
    }
    let overlap = |u: &[_], v: &[_], scale: f64| {
        if scale < ANNIHILATION_THRESHOLD {
            (0.0, 0.0)
        } else {
            let z = inner(u, v);
            ((z.norm() / scale.sqrt()).min(1.0), z.arg())
        }
    };
    let (c, phi) = overlap(&in_a, &in_b, a2 * b2);
    let (c_prime, phi_prime) = overlap(&out_a, &out_b, a2_out * b2_out);
    let params = ModelParams::new(p_a.min(1.0), p_b.min(1.0), c, c_prime, phi, phi_prime)?;
    Ok((
        Probability::from_computed(a2 / p_a)?,
        Probability::from_computed(b2 / p_b)?,
        params,
    ))
}
