use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The CLI maps [`Error::InvalidInput`] to exit code 2 and
/// [`Error::ResourceCap`] to exit code 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource cap exceeded: {what} (cap = {cap})")]
    ResourceCap { what: String, cap: usize },
    #[error("internal diagnostic: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
