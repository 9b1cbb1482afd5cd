use std::io;
use std::path::PathBuf;

use atlas_service::AtlasError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{line}: {message}")]
    Row { file: PathBuf, line: u64, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Store(#[from] AtlasError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for input the tool refused, 2 for I/O and
    /// storage failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Row { .. } | CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Store(e) => match e {
                AtlasError::Io(_)
                | AtlasError::CorruptLog { .. }
                | AtlasError::CorruptSnapshot(_)
                | AtlasError::Replay { .. } => 2,
                _ => 1,
            },
        }
    }
}
