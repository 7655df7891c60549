use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the model, the bound calculators and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("alphabet size r={r} does not divide K={k}")]
    IndivisibleK { r: usize, k: u32 },

    #[error("individual has length {got}, expected n={expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("value {value} at position {position} is outside 0..{r}")]
    ValueOutOfRange {
        position: usize,
        value: u16,
        r: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0}")]
    EmptyResult(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
