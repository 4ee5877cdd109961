use thiserror::Error;

use crate::poly::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("value {0} is outside the binary64 range")]
    FloatOverflow(String),

    #[error("invalid rational literal {0:?}: expected `p` or `p/q` with integer p, q")]
    InvalidRational(String),

    #[error("no value bound for variable {0}")]
    MissingVariable(Var),

    /// An argument lies outside the range where an operation is defined.
    #[error("{0}")]
    OutOfRange(String),

    #[error("non-unit constant term")]
    NonUnitConstantTerm,

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("divergent parameter regime: x = {0} must satisfy x < 1/2")]
    DivergentRegime(String),

    #[error("single sum did not converge within {terms} terms (partial sum {partial_sum:e})")]
    NotConverged { partial_sum: f64, terms: usize },

    /// A consistency check that must never fail did.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub(crate) fn out_of_range(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}
