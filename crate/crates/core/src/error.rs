use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system {0}{1}")]
    UnsupportedType(char, usize),
    #[error("invalid root enumeration: {0}")]
    InvalidOrder(String),
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("field of order {0}^{1} is too large")]
    FieldTooLarge(u64, u32),
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("substitution for t_{0} refers to t_{0}")]
    SelfReference(usize),
    #[error("division by {0}, which is not a monomial")]
    NonMonomialDivisor(String),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("centralizer check failed at step {step} for family {family}: coordinate {coord}")]
    CentralizerViolation {
        family: String,
        step: usize,
        coord: usize,
    },
    #[error("family {family}: residual at {index} not handled: {residual}")]
    UnhandledResidualForm {
        family: String,
        index: usize,
        residual: String,
    },
    #[error("families need manual analysis: {0:?}")]
    ManualFamiliesPresent(Vec<String>),
    #[error("interpolation through the given points is not integral")]
    NonIntegralFit,
    #[error("group of order {q}^{n} exceeds the enumeration ceiling")]
    TooLarge { q: u64, n: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
