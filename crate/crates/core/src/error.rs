use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of its admissible range.
    #[error("invalid `{key}`: {message}")]
    Config { key: &'static str, message: String },

    #[error("failed to read scenario config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed scenario config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed scenario config: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown {kind} `{name}` (expected one of: {expected})")]
    UnknownName {
        kind: &'static str,
        name: String,
        expected: String,
    },

    #[error("trust weights sum to zero; stochastic filtering has no distribution to sample")]
    DegeneratePmf,

    #[error("every agent is an attacker; mean honest distance is undefined")]
    NoHonestAgents,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: &'static str, message: impl Into<String>) -> Self {
        Error::Config {
            key,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn unknown(kind: &'static str, name: &str, expected: &[&str]) -> Self {
        Error::UnknownName {
            kind,
            name: name.to_owned(),
            expected: expected.join(", "),
        }
    }

    /// True for failures caused by the filesystem rather than by user input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
