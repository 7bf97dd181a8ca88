use std::io;
use std::path::{Path, PathBuf};

use lpsnn_core::codec::GenomeFileError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    ConfigSyntax { path: String, message: String },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    InvalidConfig(Vec<String>),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {message}", .path.display())]
    File { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] lpsnn_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl HarnessError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn file(path: &Path, message: impl Into<String>) -> Self {
        HarnessError::File {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    pub fn genome(path: &Path, e: GenomeFileError) -> Self {
        match e {
            GenomeFileError::Io(_, source) => HarnessError::io(path, source),
            GenomeFileError::Format(e) => HarnessError::file(path, e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
