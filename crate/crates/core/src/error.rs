use thiserror::Error;

use crate::game::Lifecycle;

pub type Result<V, E = Error> = std::result::Result<V, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{what} {index} out of range (must be < {limit})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("invalid argument `{arg}`: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("cannot step a state whose lifecycle is {0:?}")]
    NotPlaying(Lifecycle),

    #[error("unsupported schema version {found:?} (expected {expected:?})")]
    Schema { found: String, expected: &'static str },

    #[error("invalid document at `{path}`: {reason}")]
    Document { path: String, reason: String },

    #[error("malformed document")]
    Json(#[from] serde_json::Error),

    #[error("unknown selector {0:?}")]
    UnknownSelector(String),

    #[error("unknown action {0:?}")]
    UnknownAction(String),

    #[error("episode is done; call reset")]
    EpisodeDone,
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn document(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Document {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
