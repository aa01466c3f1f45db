use thiserror::Error;

/// Errors produced by the library. Each variant maps to one failure mode of a
/// public operation; the CLI and the C ABI translate them into exit/status codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeP(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("modulus is irreducible but its root does not generate the multiplicative group")]
    NonPrimitiveModulus,
    #[error("field order {order} exceeds the cap {cap}")]
    FieldTooLarge { order: u128, cap: u64 },
    #[error("{d} does not divide the extension degree {m}")]
    NotADivisor { d: u32, m: u32 },
    #[error("basis is linearly dependent over the subfield")]
    DependentBasis,
    #[error("basis has {got} elements, expected {expected}")]
    BasisLength { got: usize, expected: usize },
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("all-zero coordinate vector does not define a point")]
    ZeroVector,
    #[error("element {0} is not valid for this field")]
    InvalidElement(String),
    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("coset {0} occurs more than once")]
    RepeatedCoset(u32),
    #[error("no stabiliser witness maps {from} to {to}")]
    NoWitnessFound { from: String, to: String },
    #[error("point set has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("generator matrix has a zero column at {0}")]
    ZeroColumn(usize),
    #[error("negative discriminant: the upper interval bound is not real for p^e = {0}")]
    NegativeDiscriminant(String),
    #[error("interval certification inconclusive for q = {q} at e = {e}")]
    InconclusiveE { q: u64, e: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
