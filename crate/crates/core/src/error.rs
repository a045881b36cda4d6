use thiserror::Error;

/// Failure of a primitive's domain predicate during numeric evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("log of non-positive value {0}")]
    Log(f64),
    #[error("sqrt of negative value {0}")]
    Sqrt(f64),
    #[error("negative power {exponent} of zero")]
    PoleAtZero { exponent: i64 },
    #[error("non-finite value produced")]
    NonFinite,
    #[error("point has {found} coordinates, expression needs {needed}")]
    PointTooShort { needed: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown primitive `{name}` at byte {offset}")]
    UnknownPrimitive { name: String, offset: usize },
    #[error("variable x{index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("elements belong to different rings")]
    OwnerMismatch,
    #[error("mismatched presentations: {0}")]
    Mismatch(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
