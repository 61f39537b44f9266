use thiserror::Error;

use crate::globalheight::HeightReport;
use crate::localgreen::GreenValue;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class, mapped to process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Undecided,
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("bit-size budget exceeded after iterate {last_index}")]
    BitBudget { last_index: i64 },
    #[error("term budget of {budget} exceeded")]
    TermBudget { budget: usize },
    #[error("tolerance not reached: value {} +/- {} after {} iterations", .partial.value, .partial.error_radius, .partial.iterations_used)]
    GreenBudget { partial: Box<GreenValue> },
    #[error("height tolerance not reached: {reason}")]
    HeightBudget {
        reason: String,
        partial: Box<HeightReport>,
    },
    #[error("undecided: {0}")]
    Undecided(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Input(_)
            | Error::DimensionMismatch { .. }
            | Error::Parse { .. }
            | Error::Validation(_) => ErrorKind::Input,
            Error::BitBudget { .. }
            | Error::TermBudget { .. }
            | Error::GreenBudget { .. }
            | Error::HeightBudget { .. } => ErrorKind::Resource,
            Error::Undecided(_) => ErrorKind::Undecided,
        }
    }
}
