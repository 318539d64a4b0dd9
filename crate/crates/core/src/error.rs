use thiserror::Error;

/// Crate-wide error type.
///
/// `Contract` flags a violated precondition, `CorruptedState` a non-finite
/// value where finite data is required, `Domain` a well-posed call whose
/// answer does not exist (e.g. projecting the zero field).
#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("corrupted state: {0}")]
    CorruptedState(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
    pub(crate) fn corrupted(msg: impl Into<String>) -> Self {
        Error::CorruptedState(msg.into())
    }
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
