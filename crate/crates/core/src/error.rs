use thiserror::Error;

/// Errors raised by the algebra engine and the command-line harness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mismatched rings, ranks or lengths.
    #[error("structural error: {0}")]
    Structural(String),
    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A degree window is needed to report an infinite tail.
    #[error("window required: {0}")]
    WindowRequired(String),
    #[error("resource cap exceeded: {cap} (limit {limit})")]
    ResourceCap { cap: &'static str, limit: usize },
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
