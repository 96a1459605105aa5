//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Arithmetic, linear algebra, decomposition and search all report through
/// this one type; the CLI maps variants onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero in GF(p)")]
    DivisionByZero,
    #[error("elements belong to different prime fields ({0} vs {1})")]
    FieldMismatch(u64, u64),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("matrix shapes are incompatible: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("subspace ambient dimension {0} does not match space dimension {1}")]
    AmbientMismatch(usize, usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("failed to construct an adapted basis (internal exhaustion)")]
    DecompositionFailure,
    #[error("generator parameters out of range: {0}")]
    BadParams(String),
    #[error("torus parameter must be nonzero")]
    ZeroScalar,
    #[error("lift pair violates its linear constraints: {0}")]
    ConstraintViolated(String),
    #[error("bilinear form is degenerate where a non-degenerate one is required")]
    DegenerateForm,
    #[error("the requested symmetric/alternating part is degenerate")]
    PartDegenerate,
    #[error("minimal polynomial is not a power of t-1 or t+1 as required")]
    WrongCase,
    #[error("component is not of case I")]
    NotCaseI,
    #[error("bad block shape: {0}")]
    BadShape(String),
    #[error("search exceeded the node budget of {0}")]
    BudgetExceeded(u64),
    #[error("enumeration exceeded the cap of {0}")]
    CapExceeded(u64),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("bad prime in input: {0}")]
    BadPrime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
