use std::io;
use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: corrupt input: {reason}")]
    CorruptInput { path: PathBuf, reason: String },
    #[error("{path}: malformed header: {reason}")]
    MalformedHeader { path: PathBuf, reason: String },
    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] blocktrack_core::Error),
}

impl Error {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn corrupt(path: &Path, reason: impl Into<String>) -> Self {
        Error::CorruptInput { path: path.to_path_buf(), reason: reason.into() }
    }

    pub(crate) fn header(path: &Path, reason: impl Into<String>) -> Self {
        Error::MalformedHeader { path: path.to_path_buf(), reason: reason.into() }
    }

    pub(crate) fn parse(path: &Path, reason: impl ToString) -> Self {
        Error::Parse { path: path.to_path_buf(), reason: reason.to_string() }
    }
}
