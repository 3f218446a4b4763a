use thiserror::Error;

use crate::construction::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of size {size} exceeds the table cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("modulus {0} is reducible over F_q")]
    ReducibleModulus(String),
    #[error("element {0} is not primitive")]
    NotPrimitive(String),
    #[error("{n} does not divide {of}")]
    NotDivisor { n: u64, of: u64 },
    #[error("{0} is not in mu_(q+1)")]
    NotInMu(String),
    #[error("operation undefined on the zero polynomial")]
    ZeroPoly,
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree mismatch: expected {expected}, found {found:?}")]
    DegreeMismatch { expected: usize, found: Option<usize> },
    #[error("tau = {tau} is not admissible for t = {t} (block size {block})")]
    InvalidTau { t: usize, tau: usize, block: usize },
    #[error("no member of L_{k}(t={t}, tau={tau}) found")]
    EmptyFamily { k: usize, t: usize, tau: usize },
    #[error("no admissible (s, t, tau) triple for r = {r}")]
    EmptyOmega { r: u64 },
    #[error("gcd(r, q - 1) != 1 for r = {r}, q = {q}")]
    BadR { r: u64, q: u64 },
    #[error("value out of range: {0}")]
    RangeError(String),
    #[error("q = {0} is even")]
    EvenQ(u64),
    #[error("q = {0} is not congruent to 5 or 11 mod 18")]
    BadResidue(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("h vanishes at {0}, a point of mu_(q+1)")]
    UndefinedValue(String),
    #[error("invalid algorithm input: {}", join(.0))]
    InvalidInput(Vec<Violation>),
    #[error("parse error: {0}")]
    Parse(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
