use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different algebras")]
    ContextMismatch,
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("vector index out of range: ambient dimension {expected}, saw index {}", found - 1)]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("nonzero constant in a nonunital algebra")]
    UnitInNonunital,
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("structure constants are not associative")]
    NotAssociative,
    #[error("not a compatible pair: {0}")]
    NotCompatible(String),
    #[error("bilinear form is neither symmetric nor skew-symmetric")]
    FormNotSymmetric,
    #[error("pair has type {0}, formula needs type 2")]
    TypeMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("premise violated: {0}")]
    PremiseViolated(String),
    #[error("no degree budget left for a conclusive test")]
    BudgetExhausted,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
