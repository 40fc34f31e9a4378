use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("bound exceeded for {what}: {value} > {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u128,
        bound: u128,
    },
    #[error("pole at t = 0")]
    PoleAtZero,
    #[error("division by a non-unit")]
    NonUnit,
    #[error("pivot is not a unit: the module is not a free direct summand")]
    NonUnitPivot,
    #[error("scalars or subspaces from different contexts were mixed")]
    ContextMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not u-stable")]
    NotUStable,
    #[error("subspaces are not nested")]
    NotNested,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("Hodge pairs with different sums are not comparable")]
    Incomparable,
    #[error("degenerate Frobenius: {0}")]
    DegenerateF(String),
    #[error("chain is not deformable: {0}")]
    NotDeformable(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no valid auxiliary vector: {0}")]
    NoValidAuxVector(String),
    #[error("all relevant minors vanish modulo t^{0}")]
    AllMinorsVanish(usize),
    #[error("inconclusive certification: {0}")]
    Inconclusive(String),
    #[error("target label is not strictly above the input label")]
    IllOrderedTarget,
    #[error("no witness found after {tried} candidate families")]
    NotFound { tried: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group element is not invertible")]
    NotInvertible,
    #[error("too few samples: need {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
