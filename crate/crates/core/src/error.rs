use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input {value} at index {index}")]
    Domain { index: usize, value: f64 },

    #[error("unknown activation `{name}`; valid names: {}", valid.join(", "))]
    UnknownActivation { name: String, valid: Vec<String> },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid reservoir config: {0}")]
    InvalidReservoir(String),

    #[error("recurrent matrix has zero spectral radius; retry with a different seed")]
    ZeroSpectralRadius,

    #[error("reservoir state diverged at step {step}")]
    Divergence { step: usize },

    #[error("empty input sequence")]
    EmptySequence,

    #[error("washout {washout} must be smaller than sequence length {len}")]
    Washout { washout: usize, len: usize },

    #[error("normal equations are singular at lambda = {lambda}; use lambda > 0")]
    Singular { lambda: f64 },

    #[error("invalid series parameter: {0}")]
    InvalidSeries(String),

    #[error("series too short: need more than {needed} values, have {have}")]
    SeriesTooShort { needed: usize, have: usize },

    #[error("NARMA{order} generation diverged on every one of {attempts} attempts")]
    NarmaDiverged { order: usize, attempts: usize },

    #[error("target has zero variance; logNMSE is undefined")]
    ZeroVariance,

    #[error("subsample size {m} exceeds cloud size {available}")]
    SubsampleTooLarge { m: usize, available: usize },

    #[error("cost matrix entry ({row}, {col}) = {value} is negative or non-finite")]
    InvalidCost { row: usize, col: usize, value: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
