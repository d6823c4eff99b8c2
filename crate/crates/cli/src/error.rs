use std::fmt;

/// CLI failure, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or parameter ranges. Exit 1.
    Usage(String),
    /// Unreadable, unparsable, or inconsistent input. Exit 2.
    Input(String),
    /// A broken internal invariant. Exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<clickclust::Error> for CliError {
    fn from(e: clickclust::Error) -> Self {
        use clickclust::Error::*;
        match e {
            Domain(_) => CliError::Usage(e.to_string()),
            Parse { .. }
            | CodeOutOfRange { .. }
            | EmptyDataset
            | MissingDictionary
            | Dictionary(_)
            | UniverseMismatch(_)
            | InvalidClusters(_) => CliError::Input(e.to_string()),
        }
    }
}
