use thiserror::Error;

/// Crate-wide error type. Data-dependent failures only; shape and degree
/// mismatches between values that were validated at a load boundary are
/// programming errors and panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("identity {identity} failed: {witness}")]
    IdentityFailed { identity: String, witness: String },
    #[error("no antipode data: {0}")]
    EmptySolution(String),
    #[error("dimension violation: {0}")]
    DimensionViolation(String),
    #[error("non-invertible: {0}")]
    NonInvertible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
