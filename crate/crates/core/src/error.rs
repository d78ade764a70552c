use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("decision matrix needs at least one alternative and one criterion")]
    EmptyMatrix,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value {value} at row {row}, column {column}")]
    NonFinite { row: usize, column: usize, value: f64 },

    #[error("duplicate alternative identifier `{0}`")]
    DuplicateAlternative(String),

    #[error("invalid criterion: {0}")]
    Criterion(String),

    #[error("invalid weights: {0}")]
    Weights(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("selection size {k} outside 1..={len}")]
    SelectionSize { k: usize, len: usize },

    #[error("objective vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("brute-force oracle limited to {cap} alternatives, got {len}")]
    OracleCap { len: usize, cap: usize },

    #[error("unknown alternative identifier `{0}`")]
    UnknownAlternative(String),

    #[error("no samples to summarize")]
    EmptySamples,

    #[error("invalid catalog: {0}")]
    Catalog(String),

    #[error("{path}:{line}: {message}")]
    CatalogLine { path: PathBuf, line: usize, message: String },

    #[error("invalid experiment plan: {0}")]
    Plan(String),

    #[error("malformed results table: {0}")]
    Results(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
