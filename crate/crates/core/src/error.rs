use thiserror::Error;

use crate::coxeter::Family;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {rank} is out of range for type {family}")]
    RankOutOfRange { family: Family, rank: usize },

    #[error("group of type {family}{rank} has {order} elements, above the materialization cap of {cap}")]
    GroupTooLarge {
        family: Family,
        rank: usize,
        order: u64,
        cap: usize,
    },

    #[error("arrangement has {0} hyperplanes; at most 128 are supported")]
    TooManyHyperplanes(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element is not in the group: {0}")]
    NotInGroup(String),

    #[error("operation requires a type D system, got type {0}")]
    NotTypeD(Family),

    #[error("faces are not cover-related")]
    NotCoverRelated,

    #[error("face product sign vector is missing from the enumerated face set")]
    MissingFace,

    #[error("orbit choice is broken: no face of the chosen orbit has the requested support")]
    BrokenOrbitChoice,

    #[error("algebra is malformed: {0}")]
    MalformedAlgebra(String),

    #[error("algebra is not split basic: dim A/rad A = {quotient_dim}, but {idempotents} idempotents were supplied")]
    NotSplitBasic {
        quotient_dim: usize,
        idempotents: usize,
    },

    #[error("complete system check failed: {0}")]
    IncompleteSystem(String),

    #[error("re-expression in the descent basis failed: {0}")]
    BasisReexpression(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
