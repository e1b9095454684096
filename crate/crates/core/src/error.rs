use thiserror::Error;

/// Failure kinds shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// The instance exceeds a documented size limit.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// A structure failed a well-formedness check (bad label, malformed path, ...).
    #[error("structural error: {0}")]
    Structural(String),
    /// A construction that is guaranteed to succeed did not; always an internal bug.
    #[error("internal contradiction: {0}")]
    Contradiction(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
