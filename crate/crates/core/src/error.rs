//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures raised by the exact-arithmetic core.
///
/// Variants are grouped loosely by the module that raises them, but any
/// operation may propagate an error from a lower layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surds over different radicands ({0} and {1}) cannot be combined")]
    MixedRadicands(String, String),
    #[error("negative operand: {0}")]
    NegativeOperand(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("not a Diophantine class: {0}")]
    NotDiophantine(String),
    #[error("degenerate denominator d - m*b = {0}")]
    DegenerateDenominator(String),
    #[error("point {z} lies outside the window [{low}, {high}]")]
    OutOfWindow {
        z: String,
        low: String,
        high: String,
    },
    #[error("center {0} is outside the accumulation-point range")]
    CenterOutOfRange(String),
    #[error("m/d = 1/3 does not select a branch")]
    AmbiguousBranch,
    #[error("z = {0} is outside the domain of the {1} branch")]
    OutOfBranchRange(String, String),
    #[error("sigma = {0} is negative")]
    NegativeSigma(String),
    #[error("class does not block: {0}")]
    NotBlocking(String),
    #[error("path table covers lattice counts up to {have}, need {need}")]
    InsufficientPathTable { have: usize, need: usize },
    #[error("capacity table too short: last capacity {last} does not exceed {t}")]
    TableTooShort { last: String, t: String },
    #[error("reduction exceeded {0} steps")]
    StepLimit(usize),
    #[error("degree {d} is not divisible by {modulus} (numerator {numerator})")]
    DivisibilityFailure {
        d: String,
        modulus: String,
        numerator: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
