use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree {0} is outside 1..=8")]
    BadDegree(usize),
    #[error("field of size {p}^{k} does not fit in 64 bits")]
    FieldTooLarge { p: u64, k: usize },
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    NotIrreducible(usize),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("bad reduction at p = {p}: {witness}")]
    BadReduction { p: u64, witness: String },
    #[error("expected {expected} point counts, got {got}")]
    MissingCounts { expected: usize, got: usize },
    #[error("trace s_{k} = {trace} violates the Weil bound at p = {p}")]
    WeilBound { p: u64, k: usize, trace: i64 },
    #[error("Newton identity gives non-integral coefficient c_{k} ({numerator}/{k})")]
    NonIntegral { k: usize, numerator: i128 },
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("root finder did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("root {index} has residual {residual:e} above tolerance")]
    Residual { index: usize, residual: f64 },
    #[error("rhythm is not palindromic: pair {j} deviates by {deviation:e}")]
    NotPalindromic { j: usize, deviation: f64 },
    #[error("roots of the L-polynomial at p = {p} leave the circle |z| = p^(-1/2) by {max_deviation:e}")]
    OffCircle { p: u64, max_deviation: f64 },
    #[error("continued fraction terms differ between working precisions ({low:?} vs {high:?})")]
    PrecisionInstability { low: Vec<i64>, high: Vec<i64> },
    #[error("sieve step out of order: expected {expected}, got {got}")]
    SieveOrder { expected: u64, got: u64 },
    #[error("{0} is outside the 60x60 grid")]
    OffGrid(u32),
    #[error("malformed MIDI data: {0}")]
    Midi(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing counts for {curve} at p = {p}: {reason}")]
    CountsUnavailable { curve: String, p: u64, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
