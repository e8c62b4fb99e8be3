use thiserror::Error;

/// Errors raised by the library. Mathematical refutations are *not* errors;
/// they are reported through the verdict types of each module.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: every modulus must be at least 1")]
    InvalidModulus(i64),

    #[error("group of order {order} exceeds the materializable bound {bound}")]
    GroupTooLarge { order: u128, bound: usize },

    #[error("group presentation mismatch: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("element has {got} coordinates, group has rank {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("|T| = {tile} does not divide |G| = {group}")]
    SizeDoesNotDivide { tile: usize, group: usize },

    #[error("homomorphism target Z_{target} must divide the exponent {exponent}")]
    BadHomomorphismTarget { target: u64, exponent: u64 },

    #[error("homomorphism is not injective on the tile: {0}")]
    NotInjective(String),

    #[error("({0}) is not a tiling pair in the target group")]
    NotATilingPair(String),

    #[error("tiling criteria disagree on a pair; difference-set says {difference_set}, Fourier says {fourier}")]
    CriteriaDisagreement { difference_set: bool, fourier: bool },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("linear system has no solution: {0}")]
    Unsolvable(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("search bound exceeded: {0}")]
    SearchBound(String),

    #[error("{0}")]
    Io(String),

    #[error("data file corrupt: {0}")]
    Data(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
