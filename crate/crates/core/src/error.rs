use thiserror::Error;

/// Errors raised across the clustering toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: category code {code} outside 1..={max}")]
    CodeOutOfRange { line: usize, code: u64, max: usize },

    #[error("input contains no session rows")]
    EmptyDataset,

    #[error("no category-name line found; an external dictionary is required")]
    MissingDictionary,

    #[error("invalid dictionary: {0}")]
    Dictionary(String),

    #[error("{0}")]
    Domain(String),

    #[error("item universes differ: {0}")]
    UniverseMismatch(String),

    #[error("invalid cluster set: {0}")]
    InvalidClusters(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
