//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PfError {
    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),

    #[error("unsupported realization: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("form is not m-invariant in m-basis direction {direction}: {detail}")]
    NotInvariant { direction: usize, detail: String },

    #[error("degenerate construction: {0}")]
    Degenerate(String),

    #[error("numeric input rejected: {0}")]
    Numeric(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, PfError>;
