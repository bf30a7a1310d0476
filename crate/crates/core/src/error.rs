use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field spec: {0}")]
    InvalidField(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the zero polynomial has no linear factorization (f = 0)")]
    ZeroPolynomial,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("relation {index} is not respected: {relation} maps to {image}")]
    WellDefinednessFailure { index: usize, relation: String, image: String },
    #[error("solution does not satisfy relation {index}: {relation}")]
    SolutionInvalid { index: usize, relation: String },
    #[error("elements do not generate the unit ideal")]
    NotUnimodular,
    #[error("local ideals incompatible: generator {generator} of piece {i} is not in piece {j} on the overlap")]
    CompatibilityFailure { i: usize, j: usize, generator: usize },
    #[error("factor at root {0} is not invertible on the overlap")]
    UnsupportedRoot(String),
    #[error("cocycle law fails at ({0}, {1}, {2})")]
    CocycleLawViolation(usize, usize, usize),
    #[error("cocycle condition fails at ({0}, {1}, {2})")]
    CocycleConditionViolated(usize, usize, usize),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("boundary maps at degree {0} and the next do not compose to zero")]
    CompositionNotZero(usize),
    #[error("self-check failed: {0}")]
    VerificationFailed(String),
    #[error("window instability: {0}")]
    WindowInstability(String),
}
