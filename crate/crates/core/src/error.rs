use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a quadratic residue class for 2 (need p = 1 or 7 mod 8)")]
    NonResidue(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} is not congruent to 7 mod 8")]
    InvalidResidue(BigInt),
    #[error("{0} has no decomposition as a sum of four squares in Z[sqrt 2]")]
    NoDecomposition(String),
    #[error("no pair permutation reaches the required parity layout")]
    NoValidArrangement,
    #[error("coefficient pair ({0}, {1}) cannot be halved")]
    ParityViolation(BigInt, BigInt),
    #[error("coefficient parities do not match any shift pattern")]
    PatternMismatch,
    #[error("{0} is not a multiple of 1024")]
    NotMultiple(BigInt),
    #[error("{n} is not congruent to {expected}")]
    WrongResidue { n: BigInt, expected: &'static str },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("{0} is not an achievable Q16 group determinant")]
    NotAchievable(BigInt),
    #[error("normalization precondition cannot be reached for this element")]
    PreconditionUnreachable,
    #[error("scan of {requested} elements exceeds budget {limit}")]
    BudgetExceeded { requested: u128, limit: u128 },
    #[error("{0} mismatches between direct and factored determinants")]
    MismatchFound(usize),
    #[error("value too large for the bounded search: {0}")]
    TooLarge(String),
    #[error("malformed document: {0}")]
    Document(String),
}
