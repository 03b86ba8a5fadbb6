use thiserror::Error;

use crate::ruledsl::{CompileError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate {coord}: value {value} is outside 0..{arity}")]
    OutOfRange { coord: usize, value: usize, arity: usize },

    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid input: {0}")]
    Validation(String),

    /// A size guard tripped. `required` is the predicted size when it is known.
    #[error("{what}: {required} exceeds the configured cap of {cap}")]
    Resource {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Compile(#[from] CompileError),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
