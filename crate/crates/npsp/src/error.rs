use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] npsp_core::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Incomplete(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Error {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Usage errors, unreadable input and malformed files.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Core(npsp_core::Error::SolverUnsound(_)))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
