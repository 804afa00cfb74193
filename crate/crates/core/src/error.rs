//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by encoding, decoding and the simulation harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("length {0} must be even and positive")]
    OddLength(usize),
    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("element {index} has value {value}, expected 0 or 1")]
    InvalidBit { index: usize, value: u8 },
    #[error("cluster of dimension {found} where {expected} was required")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cluster dimension {0} outside the supported range 1..=5")]
    UnsupportedDimension(usize),
    #[error("operator with i={i}, t={t}, j={j} violates the parity requirement")]
    Parity { i: usize, t: usize, j: usize },
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("invalid code specification: {0}")]
    InvalidCode(String),
    #[error("code length {n} is below the minimum {min} for this decoder")]
    CodeTooShort { n: usize, min: usize },
    #[error("phase {got} requested, expected phase {expected}")]
    PhaseOrder { expected: usize, got: usize },
    #[error("phase {phase} is out of range for length {n}")]
    PhaseOutOfRange { phase: usize, n: usize },
    #[error("no operator row for layer {layer}, phase {phase}")]
    MissingScheduleRow { layer: usize, phase: usize },
    #[error("list size must be at least 1")]
    InvalidListSize,
    #[error("path {0} is not active")]
    InactivePath(usize),
    #[error("cannot clone: all {0} paths are active")]
    ListFull(usize),
    #[error("no free slot for layer {layer}, class {class}")]
    PoolExhausted { layer: usize, class: usize },
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("exhaustive search over 2^{k} messages exceeds the limit 2^{max}")]
    TooManyInfoBits { k: usize, max: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
