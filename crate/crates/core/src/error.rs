use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,

    #[error("undefined gcd: both operands are zero")]
    UndefinedGcd,

    #[error("operand not reduced: degree {found} >= modulus degree {modulus}")]
    OperandNotReduced { found: usize, modulus: u64 },

    #[error("invalid trinomial: require 0 < s < r, got r={r}, s={s}")]
    InvalidTrinomial { r: u64, s: u64 },

    #[error("s out of search range: require 0 < s <= r/2, got r={r}, s={s}")]
    OutOfSearchRange { r: u64, s: u64 },

    #[error("perfect square: factor parity undefined when r and s are both even")]
    ParityUndefined,

    #[error("test requires an odd prime degree, got r={0}")]
    NotOddPrime(u64),

    #[error("equal-degree split: degree {degree} is not a multiple of {d}")]
    SplitDegree { degree: usize, d: usize },

    #[error("equal-degree split: input has repeated factors")]
    SplitRepeatedFactors,

    #[error("equal-degree split did not converge")]
    SplitDiverged,

    #[error("invalid hex polynomial {0:?}")]
    BadHex(String),

    #[error("certificate: {0}")]
    Certificate(String),

    #[error("oracle: degree {degree} outside supported range {min}..={max}")]
    OracleRange { degree: usize, min: usize, max: usize },

    #[error("invalid search config: {0}")]
    Config(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("checkpoint r mismatch: file has r={found}, run wants r={wanted}")]
    CheckpointMismatch { found: u64, wanted: u64 },

    #[error("bench: {0}")]
    Bench(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
