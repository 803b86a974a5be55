use thiserror::Error;

use crate::classify::PartialClassification;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus is reducible over GF({p}): divisible by {factor:?}")]
    ReducibleModulus { p: u32, factor: Vec<u32> },
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    DegreeMismatch { expected: u32, got: Vec<u32> },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not the order of a subfield")]
    NotASubfieldOrder(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("code has fewer than two elements")]
    TooSmall,
    #[error("the zero matrix is not a codeword")]
    ZeroNotInCode,
    #[error("code is not square")]
    NotSquare,
    #[error("code has no invertible element")]
    NoInvertibleElement,
    #[error("code is not linear")]
    NotLinear,
    #[error("expansion basis is not linearly independent")]
    BasisNotIndependent,
    #[error("code size {0} is not a power of the alphabet size")]
    BadCardinality(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("structure is not a semifield")]
    NotASemifield,
    #[error("code is not normalized (must contain 0 and I)")]
    NotNormalized,
    #[error("code is not MRD: {0}")]
    NotMrd(String),
    #[error("subfield is not contained in the kernel")]
    KNotInKernel,
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("structures have no common kernel subfield")]
    NoCommonKernel,
    #[error("existence conditions violated: {0}")]
    ConditionsViolated(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("form is not invariant")]
    NotInvariant,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("not a subfield")]
    NotASubfield,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("search budget exhausted after {} representatives", .0.representatives.len())]
    BudgetExceeded(Box<PartialClassification>),
}
