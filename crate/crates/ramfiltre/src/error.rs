//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of jump evaluation, filtration construction and validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exact division left a nonzero remainder, or a jump came out negative.
    #[error("integrality error: {0}")]
    Integrality(String),
    /// The rewrite evaluator found no applicable rule.
    #[error("unreachable: {0}")]
    Unreachable(String),
    /// Two independent computations of the same object disagree.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// Consecutive jumps of a filtration are not strictly increasing.
    #[error("ordering error: {0}")]
    Ordering(String),
    /// A walk or search exceeded its step budget.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Integrality(_) => "IntegralityError",
            Error::Unreachable(_) => "UnreachableError",
            Error::Consistency(_) => "ConsistencyError",
            Error::Ordering(_) => "OrderingError",
            Error::Internal(_) => "InternalError",
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
