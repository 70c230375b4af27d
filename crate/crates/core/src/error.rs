use thiserror::Error;

use crate::fish::Defect;

/// Errors raised by the permutation, fish and series operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A permutation was expected to be two-stack sortable and is not.
    #[error("not two-stack sortable: {0}")]
    NotTwoStackSortable(String),
    /// A decomposition step found a configuration that a two-stack sortable
    /// permutation cannot produce.
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error("invalid decomposition tree: {0}")]
    InvalidTree(String),
    /// A growth rule was applied where its precondition fails.
    #[error("invalid growth: {0}")]
    InvalidGrowth(String),
    #[error("invalid fish: {0}")]
    InvalidFish(Defect),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An internal consistency check failed (e.g. a fixed point did not settle).
    #[error("internal consistency: {0}")]
    Internal(String),
}

impl From<Defect> for Error {
    fn from(d: Defect) -> Self {
        Error::InvalidFish(d)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
