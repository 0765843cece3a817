//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong constructing, parsing, checking, or
/// searching relations.
#[derive(Debug, Error)]
pub enum Error {
    /// Attributes referenced inconsistently: a row not matching its schema,
    /// a statement mentioning attributes outside the relation, and so on.
    #[error("schema error: {0}")]
    Schema(String),

    /// Structurally well-formed input that violates a contract, such as
    /// overlapping components of a dependency statement.
    #[error("validation error: {0}")]
    Validation(String),

    /// A malformed token or expression (attribute lists, statements,
    /// weight literals).
    #[error("syntax error: {0}")]
    Syntax(String),

    /// A line-addressed problem in an input file.
    #[error("line {line}: {msg}")]
    Parse {
        /// 1-based line number of the offending line.
        line: usize,
        /// What was wrong with it.
        msg: String,
    },

    /// Weights outside the domain a check requires (e.g. a strictly
    /// positive distribution carrying a negative weight).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured resource bound was exceeded before the answer was found.
    #[error("resource bound exceeded: {0}")]
    Resource(String),

    /// A defect in this crate: an internal cross-check disagreed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Wraps a position-free error into a line-addressed parse error.
    pub fn at_line(self, line: usize) -> Error {
        match self {
            Error::Parse { .. } => self,
            other => Error::Parse {
                line,
                msg: other.to_string(),
            },
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
