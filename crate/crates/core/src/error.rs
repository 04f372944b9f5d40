use thiserror::Error;

use crate::set::ItemId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("item {item} is outside the ground set of size {n}")]
    UnknownItem { item: ItemId, n: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("exhaustive search over {size} items refused (limit {limit})")]
    TooLarge { size: usize, limit: usize },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
