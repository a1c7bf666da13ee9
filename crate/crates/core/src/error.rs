use thiserror::Error;

/// Errors produced by the clustering engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("degenerate cluster: empty point set")]
    EmptyCluster,

    #[error("attribute index {index} out of range (m = {m})")]
    AttributeOutOfRange { index: usize, m: usize },

    #[error("point index {index} out of range (n = {n})")]
    PointOutOfRange { index: usize, n: usize },

    #[error("point index {0} listed more than once")]
    DuplicatePoint(usize),

    #[error("frequency {0} is outside the open interval (0, 1)")]
    InvalidFrequency(f64),

    #[error("standard deviation must be positive and finite, got {0}")]
    InvalidStdev(f64),

    #[error("statistics of different attribute types cannot be compared")]
    TypeMismatch,

    #[error("patterns do not partition the points: {0}")]
    NotAPartition(String),

    #[error("invalid cut-set: {0}")]
    InvalidCutSet(String),

    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("at least 2 points are required, got {0}")]
    TooFewPoints(usize),

    #[error("missing value at row {row}, column '{column}'")]
    MissingValue { row: usize, column: String },

    #[error("non-numeric value '{value}' at row {row}, column '{column}'")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("embedding has {actual} rows, expected {expected}")]
    RowCountMismatch { expected: usize, actual: usize },

    #[error("unsupported document version {found} (expected {expected})")]
    VersionMismatch { expected: u32, found: u32 },

    #[error("schema hash mismatch: document was saved for {expected}, dataset is {found}")]
    SchemaHashMismatch { expected: String, found: String },

    #[error("solution does not match the dendrogram: {0}")]
    SolutionMismatch(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
