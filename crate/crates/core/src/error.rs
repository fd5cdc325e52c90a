use thiserror::Error;

use crate::metric::Violation;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad JSON, unknown point, non-square matrix, ...
    #[error("format error: {0}")]
    Format(String),

    #[error("metric axiom violated: {0}")]
    Metric(Box<Violation>),

    #[error("{0}")]
    Precondition(String),

    #[error("solver error: {0}")]
    Solver(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Metric(Box::new(v))
    }
}
