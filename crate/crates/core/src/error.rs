use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} has negative valuation and is not in the valuation ring")]
    NegativeValuation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("lattice basis is singular")]
    SingularBasis,

    #[error("slope of the zero space is undefined")]
    ZeroDimensional,

    #[error("subspace is not contained in the ambient space")]
    NotContained,

    #[error("enumeration of {count} {what} exceeds the cap {cap}")]
    EnumerationTooLarge { what: &'static str, count: u128, cap: u128 },

    #[error("maximal destabilizer is not unique: {count} subspaces attain slope {slope} in dimension {dim}")]
    UniquenessViolation { slope: String, dim: usize, count: usize },

    #[error("submodule is not saturated")]
    NotSaturated,

    #[error("generators do not span a free direct summand of rank {expected}")]
    RankDeficient { expected: usize },

    #[error("reduction is already semistable")]
    AlreadySemistable,

    #[error("destabilizing sequence lifts to every level up to {cap}: the generic fiber is unstable")]
    GenericUnstable { cap: u32 },

    #[error("no semistable reduction after {0} modification steps")]
    IterationCapExceeded(usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid type datum: {0}")]
    InvalidType(String),
}
