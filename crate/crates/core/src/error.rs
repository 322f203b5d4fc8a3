use thiserror::Error;

use crate::exactnum::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-supplied input does not satisfy an operation's precondition.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// An identity that must hold by construction failed. Always a bug.
    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("generation error: {0}")]
    Generation(String),

    #[error("malformed matrix file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}
