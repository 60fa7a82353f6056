use thiserror::Error;

use crate::graph::GraphError;

/// Errors shared by every solver, parser and generator in the crate.
///
/// Decisions (yes/no) are never errors. A resource error means the caller
/// should not trust any answer, which is why it is kept apart from the
/// contract and input variants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("resource limit exceeded: {0}")]
    Budget(String),
    #[error("construction error: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
