use thiserror::Error;

/// Errors raised by the laboratory.
///
/// The variants mirror the three failure classes callers need to tell apart:
/// bad arguments, inputs outside a function's mathematical domain, and
/// violated preconditions of a construction.
#[derive(Debug, Error)]
pub enum MedError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("non-finite value at step {step}: {detail}")]
    NonFinite { step: usize, detail: String },

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = MedError> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> MedError {
    MedError::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> MedError {
    MedError::Domain(msg.into())
}
