use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid lexicon: {location}: {message}")]
    Lexicon { location: String, message: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("vocabulary id {id} out of range (size {size})")]
    IdOutOfRange { id: u32, size: usize },

    #[error("{what} mismatch: expected {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: String,
        found: String,
    },

    #[error("answered instances missing from gold standard: {}", .0.join(", "))]
    MissingGold(Vec<String>),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn lexicon(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Lexicon {
            location: location.into(),
            message: message.into(),
        }
    }
}
