use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("budget exceeded: {what} reached {count}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    /// A character decomposition produced a non-integral or negative
    /// multiplicity. This always points at a bug upstream of the decomposition.
    #[error("corrupted character: {0}")]
    CorruptedCharacter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
