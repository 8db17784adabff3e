use thiserror::Error;

/// Failure kinds shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
