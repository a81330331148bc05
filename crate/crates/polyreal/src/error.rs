//! Crate-wide error type.

use std::fmt;

/// Errors produced by arithmetic, parsing, checking and evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A dyadic exponent left the configured bound.
    ExponentOverflow { exponent: i64 },
    /// A computation exceeded a configured budget (refinement rounds,
    /// alignment shifts, piece counts, query precision).
    Resource { what: String },
    /// An operation was applied outside its domain (negative recursion
    /// variable, negative discrete argument).
    Domain { what: String },
    /// Syntax error while reading a term or a point literal.
    Parse { msg: String, line: usize, col: usize },
    /// A term failed the tier check and cannot be evaluated.
    IllTiered { violations: usize },
    /// Argument count does not match the term signature.
    Arity { expected: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExponentOverflow { exponent } => {
                write!(f, "dyadic exponent {exponent} outside configured bound")
            }
            Self::Resource { what } => write!(f, "resource budget exhausted: {what}"),
            Self::Domain { what } => write!(f, "domain error: {what}"),
            Self::Parse { msg, line, col } => write!(f, "parse error at {line}:{col}: {msg}"),
            Self::IllTiered { violations } => {
                write!(f, "term rejected by tier checker ({violations} violations)")
            }
            Self::Arity { expected, got } => {
                write!(f, "arity mismatch: expected {expected} arguments, got {got}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
