use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero-norm vector has no direction")]
    ZeroVector,
    #[error("empty input")]
    Empty,
    #[error("index {index} out of range for {len} items")]
    OutOfRange { index: usize, len: usize },
    #[error("need at least {needed} items, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("part count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("part count {parts} exceeds particle count {particles}")]
    TooManyParts { parts: usize, particles: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
