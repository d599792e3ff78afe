use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum BolabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("field is not real-valued (max imaginary part {0:e})")]
    NotReal(f64),
    #[error("field does not have zero mean (mean {0:e})")]
    NotZeroMean(f64),
    #[error("trajectory format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, BolabError>;
