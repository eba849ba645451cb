use std::path::PathBuf;

use thiserror::Error;
use toybox_core::AgentError;

pub type Result<V, E = HarnessError> = std::result::Result<V, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] toybox_core::Error),

    /// The simulator rejected something while a trial was running.
    #[error("case {case_id}, seed {seed}: {source}")]
    Trial {
        case_id: String,
        seed: u64,
        #[source]
        source: toybox_core::Error,
    },

    /// The agent failed to produce an action.
    #[error("case {case_id}, seed {seed}: {source}")]
    Agent {
        case_id: String,
        seed: u64,
        #[source]
        source: AgentError,
    },

    #[error("invalid {arg}: {reason}")]
    InvalidArgument { arg: &'static str, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
