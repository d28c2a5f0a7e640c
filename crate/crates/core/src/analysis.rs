//! End-to-end analysis of one count table, and the bundled Fruits/Vegetables
//! exemplars with their published probabilities.

use serde::{Deserialize, Serialize};

use crate::context::{fit_params, FitResult};
use crate::corpus::{probabilities, table_from_ratios, CountTable, ProbabilityTriple};
use crate::error::{Error, Result};
use crate::interference::{
    classify_extension, fits_interference_only, interference_interval, ExtensionClass,
    InterferenceInterval,
};

/// Page counts for A = "fruits" and B = "vegetables" shared by every exemplar.
pub const FRUITS_TOTAL: u64 = 378_000_000;
pub const VEGETABLES_TOTAL: u64 = 357_000_000;
pub const FRUITS_AND_VEGETABLES_TOTAL: u64 = 115_000_000;

/// Column names of the reproduced table, in order.
pub const COLUMNS: [&str; 5] = ["mu_a", "mu_b", "mu_ab", "mu_min", "mu_max"];

/// One exemplar row: totals, the three count ratios, and the published
/// interference-interval endpoints to compare against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceRow {
    pub exemplar: String,
    pub n_a: u64,
    pub n_b: u64,
    pub n_ab: u64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_ab: f64,
    pub mu_min: f64,
    pub mu_max: f64,
}

impl ReferenceRow {
    pub fn table(&self) -> Result<CountTable> {
        table_from_ratios(
            self.n_a, self.n_b, self.n_ab, self.mu_a, self.mu_b, self.mu_ab,
        )
    }

    pub fn published(&self) -> [f64; 5] {
        [self.mu_a, self.mu_b, self.mu_ab, self.mu_min, self.mu_max]
    }
}

const EXEMPLARS: [(&str, [f64; 5]); 8] = [
    ("Apple", [1.66e-1, 2.36e-1, 2.71e-1, 1.02e-1, 3.34e-1]),
    ("Parsley", [1.21e-2, 4.52e-2, 3.19e-2, 1.31e-2, 5.95e-2]),
    ("Yam", [2.88e-3, 3.48e-3, 4.76e-3, 1.15e-3, 7.30e-3]),
    ("Elderberry", [2.16e-3, 3.95e-3, 4.57e-3, 1.25e-3, 6.49e-3]),
    ("Olive", [5.22e-2, 2.13e-1, 2.90e-1, 6.56e-2, 2.12e-1]),
    ("Raisin", [3.49e-2, 3.83e-2, 1.04e-1, 1.45e-3, 9.69e-2]),
    ("Almond", [9.01e-2, 1.10e-1, 2.55e-1, 6.21e-3, 2.35e-1]),
    ("Lentils", [1.42e-2, 1.69e-2, 4.39e-2, 1.38e-3, 4.10e-2]),
];

/// The eight Fruits/Vegetables exemplars.
pub fn table1_reference() -> Vec<ReferenceRow> {
    EXEMPLARS
        .iter()
        .map(|(name, [mu_a, mu_b, mu_ab, mu_min, mu_max])| ReferenceRow {
            exemplar: (*name).to_string(),
            n_a: FRUITS_TOTAL,
            n_b: VEGETABLES_TOTAL,
            n_ab: FRUITS_AND_VEGETABLES_TOTAL,
            mu_a: *mu_a,
            mu_b: *mu_b,
            mu_ab: *mu_ab,
            mu_min: *mu_min,
            mu_max: *mu_max,
        })
        .collect()
}

/// Count table of a bundled exemplar, matched case-insensitively.
///
/// Olive cannot be rebuilt from the shared totals: its published ratios put
/// `n_abx ≈ 3.34e7` above `n_ax ≈ 1.97e7`, so it yields `InconsistentRatios`.
pub fn fixture_table(name: &str) -> Result<CountTable> {
    table1_reference()
        .into_iter()
        .find(|row| row.exemplar.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::InvalidInput(format!("unknown exemplar {name:?}")))?
        .table()
}

/// Three significant figures in scientific notation, e.g. `1.66e-1`.
pub fn sci3(value: f64) -> String {
    format!("{value:.2e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproducedRow {
    pub exemplar: String,
    /// `None` when the row's counts cannot be rebuilt.
    pub computed: Option<[f64; 5]>,
    pub published: [f64; 5],
    pub error: Option<String>,
}

/// A cell whose computed value differs from the published one at three
/// significant figures, or could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub exemplar: String,
    pub column: String,
    pub computed: Option<f64>,
    pub published: f64,
    pub relative_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub rows: Vec<ReproducedRow>,
    pub deviations: Vec<Deviation>,
}

/// The five columns recomputed from a row's counts.
pub fn compute_row(row: &ReferenceRow) -> Result<[f64; 5]> {
    let table = row.table()?;
    let triple = probabilities(&table)?;
    let interval = interference_interval(&table)?;
    Ok([
        triple.mu_a.value(),
        triple.mu_b.value(),
        triple.mu_ab_observed.value(),
        interval.lo.value(),
        interval.hi.value(),
    ])
}

/// Recomputes every row and lists the cells that differ from the reference.
pub fn reproduce_table(reference: &[ReferenceRow]) -> Reproduction {
    let mut rows = Vec::with_capacity(reference.len());
    let mut deviations = Vec::new();
    for row in reference {
        let published = row.published();
        let outcome = compute_row(row);
        for (k, column) in COLUMNS.iter().enumerate() {
            let computed = outcome.as_ref().ok().map(|cells| cells[k]);
            if computed.map(sci3) != Some(sci3(published[k])) {
                deviations.push(Deviation {
                    exemplar: row.exemplar.clone(),
                    column: (*column).to_string(),
                    computed,
                    published: published[k],
                    relative_error: computed.map(|c| ((c - published[k]) / published[k]).abs()),
                });
            }
        }
        rows.push(ReproducedRow {
            exemplar: row.exemplar.clone(),
            computed: outcome.as_ref().ok().copied(),
            published,
            error: outcome.err().map(|e| e.to_string()),
        });
    }
    Reproduction { rows, deviations }
}

/// Everything the pipeline derives from one count table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub table: CountTable,
    pub triple: ProbabilityTriple,
    pub extension: ExtensionClass,
    pub interference: InterferenceInterval,
    pub interference_only_feasible: bool,
    /// Observed ratio lies between `μ(A)` and `μ(B)`.
    pub context_only_feasible: bool,
    pub fit: FitResult,
}

pub fn analyze(table: &CountTable) -> Result<AnalysisReport> {
    let triple = probabilities(table)?;
    let (mu_a, mu_b, target) = (
        triple.mu_a.value(),
        triple.mu_b.value(),
        triple.mu_ab_observed.value(),
    );
    Ok(AnalysisReport {
        table: *table,
        triple,
        extension: classify_extension(triple.mu_a, triple.mu_b, triple.mu_ab_observed),
        interference: interference_interval(table)?,
        interference_only_feasible: fits_interference_only(table)?,
        context_only_feasible: mu_a.min(mu_b) <= target && target <= mu_a.max(mu_b),
        fit: fit_params(mu_a, mu_b, target)?,
    })
}

/// Sorted keys, no insignificant whitespace.
pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string(&serde_json::to_value(value)?)
}
