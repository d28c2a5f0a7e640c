use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("state is annihilated by the context projector (squared norm {norm_sqr})")]
    AnnihilatedState { norm_sqr: f64 },

    #[error("superposition of opposite states has zero norm")]
    DegenerateSuperposition,

    #[error("characteristic state requires a nonempty index set")]
    EmptyIndexSet,

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not an orthogonal projector (deviation {deviation:e})")]
    NotAProjector { deviation: f64 },

    #[error("dense projectors are limited to dimension {max}, got {dim}")]
    DenseTooLarge { dim: usize, max: usize },

    #[error("projectors do not commute")]
    IncompatibleProjectors,

    #[error("probability {value} outside [0, 1] beyond round-off")]
    NumericalHealth { value: f64 },

    #[error("direct and expanded combined probabilities disagree: {direct} vs {expansion}")]
    OracleDisagreement { direct: f64, expansion: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid count table: {0}")]
    InvalidTable(String),

    #[error("zero denominator: {marginal} is 0")]
    ZeroDenominator { marginal: &'static str },

    #[error("rounded counts are inconsistent: {0}")]
    InconsistentRatios(String),

    #[error("degenerate denominator ({value:e})")]
    DegenerateDenominator { value: f64 },

    #[error("phase list for {set} has length {actual}, expected {expected}")]
    PhaseCountMismatch {
        set: &'static str,
        expected: u64,
        actual: usize,
    },

    #[error("target {target} is not bracketed by [{lo}, {hi}]")]
    UnreachableTarget { target: f64, lo: f64, hi: f64 },

    #[error("corpus i/o: {0}")]
    Io(String),

    #[error("corpus parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
