use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input. `line` is 1-based; 0 means the whole input.
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// A fitness evaluation failed for one member of a population.
    #[error("fitness evaluation failed for chromosome {index}: {source}")]
    Fitness {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
