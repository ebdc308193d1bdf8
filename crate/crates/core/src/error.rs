use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A coloring file or certificate failed to parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A guarantee-backed extraction did not go through. This should never
    /// happen on valid inputs; the payload describes the failing step so a
    /// counterexample certificate can be written for inspection.
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),

    /// An internally produced witness failed re-validation. Indicates a bug,
    /// never silently accepted.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
