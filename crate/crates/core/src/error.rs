use std::fmt;

use thiserror::Error;

use crate::relational::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location-annotated syntax error from one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub what: &'static str,
    pub input: String,
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} syntax error at offset {}: {} (in `{}`)",
            self.what, self.offset, self.message, self.input
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),

    #[error("malformed {what}: {message}")]
    Format { what: &'static str, message: String },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{relation}` has no attribute `{attribute}`")]
    UnknownAttribute { relation: String, attribute: String },

    #[error("cyclic view dependency: {}", .0.join(" -> "))]
    CyclicViews(Vec<String>),

    #[error("relation `{relation}` expects {expected} values, got {found}")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },

    #[error("query is not well formed: {0}")]
    IllFormedQuery(String),

    #[error("{} integrity constraint violation(s); first: {}", .0.len(), .0[0])]
    ConstraintViolation(Vec<Violation>),

    #[error("schema subsumption is not supported for these constraints: {}", .0.join("; "))]
    UnsupportedConstraintClass(Vec<String>),

    #[error("instance has no solution w.r.t. the OBDA specification: {}", .0.join("; "))]
    NoSolution(Vec<String>),

    #[error("no explanation exists")]
    NoExplanation,

    #[error("budget of {limit} exceeded while {during}")]
    BudgetExceeded { limit: usize, during: &'static str },

    #[error("{operation} is not available for the {fragment} fragment")]
    UnsupportedFragment {
        fragment: String,
        operation: &'static str,
    },

    #[error("chase did not reach a fixpoint within {0} rounds")]
    ChaseBoundExceeded(usize),

    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("explanation has arity {found}, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("tuple {0} is present in the query answer")]
    TuplePresent(String),

    #[error("answer set does not match the query result")]
    AnswerMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn format(what: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            what,
            message: message.into(),
        }
    }
}
