//! Combined-concept probability from interference alone.
//!
//! With no context (`N = I`) and characteristic states for A and B, `μ(AB)`
//! depends on the per-page phase differences `β_j − α_j` only through two
//! cosine sums: one over pages with A, B and X, one over pages with A and B but
//! not X. Sweeping those sums over their ranges gives the interference interval.

use serde::{Deserialize, Serialize};

use crate::corpus::CountTable;
use crate::error::{Error, Result};
use crate::hilbert::Probability;

const DENOMINATOR_FLOOR: f64 = 1e-12;
const BOUNDARY_TOLERANCE: f64 = 1e-12;
const MEMBERSHIP_SLACK: f64 = 1e-12;

/// `[lo, hi] ⊆ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceInterval {
    pub lo: Probability,
    pub hi: Probability,
}

impl InterferenceInterval {
    pub fn new(lo: Probability, hi: Probability) -> Result<Self> {
        if lo.value() > hi.value() + MEMBERSHIP_SLACK {
            return Err(Error::InvalidInput(format!("interval lo {lo} > hi {hi}")));
        }
        Ok(InterferenceInterval { lo, hi })
    }

    /// Membership with absolute slack on both ends.
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lo.value() - slack && value <= self.hi.value() + slack
    }

    pub fn width(&self) -> f64 {
        self.hi.value() - self.lo.value()
    }
}

/// Unclamped interval endpoints, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Phase differences `β_j − α_j`, one per page with A, B and X and one per
/// page with A and B but not X.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAssignment {
    pub deltas_x: Vec<f64>,
    pub deltas_x_prime: Vec<f64>,
}

impl PhaseAssignment {
    /// Every page with the same pair of phase differences.
    pub fn uniform(table: &CountTable, delta_x: f64, delta_x_prime: f64) -> Self {
        PhaseAssignment {
            deltas_x: vec![delta_x; table.n_abx() as usize],
            deltas_x_prime: vec![delta_x_prime; table.n_abx_not() as usize],
        }
    }

    pub fn cosine_sums(&self) -> CosineSums {
        CosineSums {
            k_x: self.deltas_x.iter().map(|d| d.cos()).sum(),
            k_x_prime: self.deltas_x_prime.iter().map(|d| d.cos()).sum(),
        }
    }
}

/// `k_x = Σ_{j∈J_ABX} cos(β_j − α_j)` and the same sum over `J_ABX′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineSums {
    pub k_x: f64,
    pub k_x_prime: f64,
}

struct Terms {
    average: f64,
    sqrt_nanb: f64,
}

fn terms(table: &CountTable) -> Result<Terms> {
    if table.n_a() == 0 {
        return Err(Error::ZeroDenominator { marginal: "n_a" });
    }
    if table.n_b() == 0 {
        return Err(Error::ZeroDenominator { marginal: "n_b" });
    }
    let mu_a = table.n_ax() as f64 / table.n_a() as f64;
    let mu_b = table.n_bx() as f64 / table.n_b() as f64;
    Ok(Terms {
        average: 0.5 * (mu_a + mu_b),
        sqrt_nanb: (table.n_a() as f64).sqrt() * (table.n_b() as f64).sqrt(),
    })
}

fn ratio(numerator: f64, denominator: f64) -> Result<f64> {
    if denominator.abs() <= DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { value: denominator });
    }
    Ok(numerator / denominator)
}

/// `μ(AB) = (½[μ(A)+μ(B)] + k_x/√(n_a n_b)) / (1 + (k_x + k_x′)/√(n_a n_b))`.
pub fn mu_ab_from_cosine_sums(table: &CountTable, sums: CosineSums) -> Result<Probability> {
    let slack = 1e-9;
    let (in_x, out_x) = (table.n_abx() as f64, table.n_abx_not() as f64);
    if sums.k_x.abs() > in_x + slack || sums.k_x_prime.abs() > out_x + slack {
        return Err(Error::InvalidInput(format!(
            "cosine sums ({}, {}) exceed page counts ({in_x}, {out_x})",
            sums.k_x, sums.k_x_prime
        )));
    }
    let t = terms(table)?;
    let numerator = t.average + sums.k_x / t.sqrt_nanb;
    let denominator = 1.0 + (sums.k_x + sums.k_x_prime) / t.sqrt_nanb;
    Probability::from_computed(ratio(numerator, denominator)?)
}

/// `μ(AB)` for an explicit per-page phase assignment.
pub fn mu_ab_interference(table: &CountTable, phases: &PhaseAssignment) -> Result<Probability> {
    if phases.deltas_x.len() as u64 != table.n_abx() {
        return Err(Error::PhaseCountMismatch {
            set: "J_ABX",
            expected: table.n_abx(),
            actual: phases.deltas_x.len(),
        });
    }
    if phases.deltas_x_prime.len() as u64 != table.n_abx_not() {
        return Err(Error::PhaseCountMismatch {
            set: "J_ABX'",
            expected: table.n_abx_not(),
            actual: phases.deltas_x_prime.len(),
        });
    }
    mu_ab_from_cosine_sums(table, phases.cosine_sums())
}

/// Interval endpoints before clamping. The minimum sets every cosine over
/// `J_ABX` to −1 and over `J_ABX′` to +1; the maximum the reverse.
pub fn interference_interval_raw(table: &CountTable) -> Result<RawInterval> {
    let t = terms(table)?;
    let shared = table.n_abx() as f64 / t.sqrt_nanb;
    let imbalance = (table.n_abx() as f64 - table.n_abx_not() as f64) / t.sqrt_nanb;
    Ok(RawInterval {
        lo: ratio(t.average - shared, 1.0 - imbalance)?,
        hi: ratio(t.average + shared, 1.0 + imbalance)?,
    })
}

pub fn interference_interval(table: &CountTable) -> Result<InterferenceInterval> {
    let raw = interference_interval_raw(table)?;
    InterferenceInterval::new(
        Probability::from_computed(raw.lo)?,
        Probability::from_computed(raw.hi)?,
    )
}

/// Whether the observed `n_abx / n_ab` is reachable by interference alone.
pub fn fits_interference_only(table: &CountTable) -> Result<bool> {
    if table.n_ab() == 0 {
        return Err(Error::ZeroDenominator { marginal: "n_ab" });
    }
    let observed = table.n_abx() as f64 / table.n_ab() as f64;
    Ok(interference_interval(table)?.contains(observed, MEMBERSHIP_SLACK))
}

/// Position of `μ(AB)` relative to `μ(A)` and `μ(B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionClass {
    /// Below both individual probabilities.
    DoubleUnderextension,
    /// Strictly between them: over one, under the other.
    SingleExtension,
    /// Above both.
    DoubleOverextension,
    /// Equal to the smaller or the larger one.
    Boundary,
}

pub fn classify_extension(
    mu_a: Probability,
    mu_b: Probability,
    mu_ab: Probability,
) -> ExtensionClass {
    let (lo, hi) = if mu_a <= mu_b {
        (mu_a.value(), mu_b.value())
    } else {
        (mu_b.value(), mu_a.value())
    };
    let v = mu_ab.value();
    if (v - lo).abs() <= BOUNDARY_TOLERANCE || (v - hi).abs() <= BOUNDARY_TOLERANCE {
        ExtensionClass::Boundary
    } else if v > hi {
        ExtensionClass::DoubleOverextension
    } else if v < lo {
        ExtensionClass::DoubleUnderextension
    } else {
        ExtensionClass::SingleExtension
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::table_from_ratios;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn fixture(mu_a: f64, mu_b: f64, mu_ab: f64) -> CountTable {
        table_from_ratios(378_000_000, 357_000_000, 115_000_000, mu_a, mu_b, mu_ab).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn vanishing_cosines_give_the_average() {
        let t = CountTable::new(10, 8, 5, 4, 2, 2).unwrap();
        let phases = PhaseAssignment::uniform(&t, FRAC_PI_2, FRAC_PI_2);
        let mu = mu_ab_interference(&t, &phases).unwrap().value();
        assert!((mu - 0.5 * (0.4 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn aligned_phases_reach_the_maximum() {
        let t = CountTable::new(10, 8, 5, 4, 2, 2).unwrap();
        let hi = mu_ab_interference(&t, &PhaseAssignment::uniform(&t, 0.0, PI)).unwrap();
        let lo = mu_ab_interference(&t, &PhaseAssignment::uniform(&t, PI, 0.0)).unwrap();
        let interval = interference_interval(&t).unwrap();
        assert!((hi.value() - interval.hi.value()).abs() < 1e-12);
        assert!((lo.value() - interval.lo.value()).abs() < 1e-12);
    }

    #[test]
    fn apple_maximum_through_cosine_sums() {
        // Same cosine sums as the all-0 / all-π phase assignment, without
        // materializing 10^8 phases.
        let t = fixture(0.166, 0.236, 0.271);
        let sums = CosineSums {
            k_x: t.n_abx() as f64,
            k_x_prime: -(t.n_abx_not() as f64),
        };
        let hi = mu_ab_from_cosine_sums(&t, sums).unwrap().value();
        assert!(rel(hi, 3.34e-1) < 5e-3, "{hi}");
    }

    #[test]
    fn phase_counts_must_match() {
        let t = CountTable::new(10, 8, 5, 4, 2, 2).unwrap();
        let phases = PhaseAssignment {
            deltas_x: vec![0.0],
            deltas_x_prime: vec![0.0; 3],
        };
        assert!(matches!(
            mu_ab_interference(&t, &phases),
            Err(Error::PhaseCountMismatch { set: "J_ABX", .. })
        ));
    }

    #[test]
    fn published_intervals_for_apple_and_elderberry() {
        // These two rows rebuild from the shared totals to within 1% of the
        // published endpoints; see the acceptance suite for the full table.
        let apple = interference_interval(&fixture(0.166, 0.236, 0.271)).unwrap();
        assert!(rel(apple.lo.value(), 1.02e-1) < 1e-2);
        assert!(rel(apple.hi.value(), 3.34e-1) < 1e-2);
        let elder = interference_interval(&fixture(2.16e-3, 3.95e-3, 4.57e-3)).unwrap();
        assert!(rel(elder.lo.value(), 1.25e-3) < 1e-2);
        assert!(rel(elder.hi.value(), 6.49e-3) < 1e-2);
    }

    #[test]
    fn identical_words_stretch_to_unit_interval() {
        for n_x in 1..100u64 {
            let t = CountTable::new(100, 100, 100, n_x, n_x, n_x).unwrap();
            let interval = interference_interval(&t).unwrap();
            assert!(interval.lo.value().abs() < 1e-12);
            assert!((interval.hi.value() - 1.0).abs() < 1e-12);
            assert!(interval.contains(n_x as f64 / 100.0, 0.0));
        }
        // μ = 1 with A = B puts a zero in the lower denominator
        let t = CountTable::new(100, 100, 100, 100, 100, 100).unwrap();
        assert!(matches!(
            interference_interval(&t),
            Err(Error::DegenerateDenominator { .. })
        ));
    }

    #[test]
    fn feasibility_examples() {
        assert!(fits_interference_only(&fixture(0.166, 0.236, 0.271)).unwrap());
        assert!(!fits_interference_only(&fixture(9.01e-2, 1.10e-1, 2.55e-1)).unwrap());
        // every A-and-B page has X, average below 1
        let t = CountTable::new(100, 100, 20, 50, 40, 20).unwrap();
        assert!(!fits_interference_only(&t).unwrap());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_extension(p(0.166), p(0.236), p(0.271)),
            ExtensionClass::DoubleOverextension
        );
        assert_eq!(
            classify_extension(p(0.0121), p(0.0452), p(0.0319)),
            ExtensionClass::SingleExtension
        );
        assert_eq!(
            classify_extension(p(0.3), p(0.3), p(0.3)),
            ExtensionClass::Boundary
        );
        assert_eq!(
            classify_extension(p(0.3), p(0.2), p(0.1)),
            ExtensionClass::DoubleUnderextension
        );
        assert_eq!(
            classify_extension(p(0.3), p(0.2), p(0.2)),
            ExtensionClass::Boundary
        );
    }
}
