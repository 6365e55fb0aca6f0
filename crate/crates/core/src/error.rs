use thiserror::Error;

/// Errors produced by field construction, evaluation and integration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value: {what}")]
    NonFinite { what: String },

    #[error("solution blew up (non-finite state) at t = {t}")]
    BlowUp { t: f64 },

    #[error("evaluation time {t} outside [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
