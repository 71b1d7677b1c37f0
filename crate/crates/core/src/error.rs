use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Domain(String),

    #[error("balls in one cover must share a metric tag")]
    MixedMetrics,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for building a [`Error::Domain`] from a format string.
macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(format!($($arg)*))
    };
}
pub(crate) use domain;
