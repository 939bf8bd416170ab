//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KirigamiError {
    #[error("unknown transformation path `{0}`")]
    UnknownPath(String),

    #[error("unknown solid `{0}`")]
    UnknownSolid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("solid construction failed: {0}")]
    Solid(String),

    #[error("pattern construction failed: {0}")]
    Pattern(String),

    #[error("assembly construction failed: {0}")]
    Assembly(String),

    #[error("closure solve failed: {0}")]
    Solver(String),

    #[error("fold trace failed: {0}")]
    Trace(String),

    #[error("verification failed: {0}")]
    Verify(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, KirigamiError>;
