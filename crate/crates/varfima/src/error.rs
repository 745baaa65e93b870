use thiserror::Error;

/// Errors produced by series construction, simulation, spectral estimation
/// and the Monte Carlo harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid bandwidth: {0}")]
    InvalidBandwidth(String),

    #[error("invalid memory parameter: {0}")]
    InvalidMemoryParam(String),

    #[error("invalid taper: {0}")]
    InvalidTaper(String),

    #[error("invalid smoothing window: {0}")]
    InvalidWindow(String),

    #[error("invalid simulation spec: {0}")]
    InvalidSimSpec(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("invalid experiment grid: {0}")]
    InvalidGrid(String),

    #[error("replication {replication} failed: {source}")]
    Replication {
        replication: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("csv parse error at line {line}, column {col}: {msg}")]
    CsvData { line: u64, col: usize, msg: String },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
