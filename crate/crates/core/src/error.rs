use thiserror::Error;

/// Errors raised by the sketching engine and the pipelines built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A configuration value violates a parameter invariant.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The caller passed inputs that do not satisfy an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
