use thiserror::Error;

use crate::diophantine::DiophError;
use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("resource limit exceeded: {expanded} nodes expanded (limit {limit})")]
    ResourceLimit { expanded: u64, limit: u64 },
    #[error("ground set contains {0} more than once")]
    DuplicateElement(String),
    #[error("index {index} out of range for a ground set of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("element {index} occurs in no atom; its exponent is undefined")]
    UndefinedExponent { index: usize },
    #[error("sequence is not zero-sum")]
    NotZeroSum,
    #[error("ground set is not condensed (element {index} occurs in no atom)")]
    NotCondensed { index: usize },
    #[error("sequence length {got} does not match ground set size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("ground set has {n} elements; at most {cap} are supported here")]
    TooManyElements { n: usize, cap: usize },
    #[error("refinement did not reach a divisor theory within {steps} steps")]
    StepCapExceeded { steps: usize, diagnostics: String },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl From<DiophError> for Error {
    fn from(e: DiophError) -> Self {
        match e {
            DiophError::Group(g) => Error::Group(g),
            DiophError::ResourceLimit { expanded, limit } => Error::ResourceLimit { expanded, limit },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
