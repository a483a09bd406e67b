//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum EdcError {
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("solution pool not full: {filled}/{capacity} generations stored")]
    PoolNotFull { filled: usize, capacity: usize },

    #[error("SVD failed to converge on the solution pool")]
    SvdFailed,

    #[error("empty solution block")]
    EmptyBlock,

    #[error("mean tracker not initialized")]
    TrackerUninitialized,

    #[error("covariance factorization failed even at jitter {max_jitter:e}{context}")]
    SingularCovariance { max_jitter: f64, context: String },

    #[error("malformed config {path}: {message}")]
    MalformedConfig { path: PathBuf, message: String },

    #[error("malformed trace {path}: {message}")]
    MalformedTrace { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, EdcError>;
