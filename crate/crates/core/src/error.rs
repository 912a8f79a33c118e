use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by parsing, validation-gated operations and the algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid specification: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("{what} limit exceeded: {actual} > {limit}")]
    LimitExceeded {
        what: &'static str,
        limit: u64,
        actual: BigUint,
    },

    #[error("specification is not simple: cell `{cell}` has an edge between pins `{a}` and `{b}`")]
    NotSimple { cell: String, a: String, b: String },

    #[error("cannot resolve `{path}`: {reason}")]
    Unresolved { path: String, reason: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("instance over oracle budget: {size} > {budget}")]
    OverBudget { size: usize, budget: usize },

    #[error("degree bound {given} is below the realized maximum degree {actual}")]
    DegreeBound { given: BigUint, actual: BigUint },

    #[error("cycle detected in circuit expansion")]
    Cycle,
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Invalid(_) => "invalid",
            Error::LimitExceeded { .. } => "limit-exceeded",
            Error::NotSimple { .. } => "not-simple",
            Error::Unresolved { .. } => "unresolved",
            Error::Malformed(_) => "malformed",
            Error::OverBudget { .. } => "over-budget",
            Error::DegreeBound { .. } => "degree-bound",
            Error::Cycle => "cycle",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn limit(what: &'static str, limit: u64, actual: BigUint) -> Self {
        Error::LimitExceeded { what, limit, actual }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
