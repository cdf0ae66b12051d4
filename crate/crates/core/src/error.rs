use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "iterative scheme did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The set is empty (polytope infeasible, lazy intersection with no common point).
    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("mapping value is empty at t = {t}: {reason}")]
    EmptyValue { t: f64, reason: String },

    #[error("no selection could be constructed at t = {t}: {reason}")]
    SelectionInfeasible { t: f64, reason: String },

    #[error("every candidate selection has an infinite integral functional")]
    LeftSideInfinite,

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid {context}: {message}")]
    Validation { context: String, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            context: context.into(),
            message: message.into(),
        }
    }

    pub(crate) fn empty_value(t: f64, reason: impl Into<String>) -> Self {
        Error::EmptyValue {
            t,
            reason: reason.into(),
        }
    }

    pub(crate) fn infeasible(t: f64, reason: impl Into<String>) -> Self {
        Error::SelectionInfeasible {
            t,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
