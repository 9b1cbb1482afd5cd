use std::io;

use atlas_core::GraphError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Validation(String),
    #[error("{0} not found")]
    NotFound(String),
    #[error("request carries no valid identity")]
    Unauthenticated,
    #[error("storage I/O failed: {0}")]
    Io(#[from] io::Error),
    #[error("event log corrupt at byte offset {offset}: {reason}")]
    CorruptLog { offset: u64, reason: String },
    #[error("snapshot unreadable: {0}")]
    CorruptSnapshot(String),
    #[error("replay diverged at log record {seq}: {reason}")]
    Replay { seq: u64, reason: String },
}

impl AtlasError {
    /// Stable machine-readable code for API error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            AtlasError::Graph(GraphError::UnknownPerson(_) | GraphError::UnknownLink(_)) => "not_found",
            AtlasError::Graph(GraphError::DuplicateLink { .. }) => "duplicate_link",
            AtlasError::Graph(GraphError::Unauthorized { .. }) => "forbidden",
            AtlasError::Graph(_) | AtlasError::Validation(_) => "validation",
            AtlasError::NotFound(_) => "not_found",
            AtlasError::Unauthenticated => "unauthenticated",
            AtlasError::Io(_) => "io",
            AtlasError::CorruptLog { .. } | AtlasError::CorruptSnapshot(_) | AtlasError::Replay { .. } => "corrupt_store",
        }
    }
}
