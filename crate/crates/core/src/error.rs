use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} is undefined at the zero vector")]
    ZeroVector(&'static str),

    #[error("{0} is undefined for the zero operator")]
    ZeroOperator(&'static str),

    #[error("facet system is unbounded: facet normals span {rank} of {dim} dimensions")]
    Unbounded { rank: usize, dim: usize },

    #[error("point set is lower-dimensional: rank {rank} in dimension {dim}")]
    LowerDimensional { rank: usize, dim: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("could not satisfy hypotheses for `{kind}` within {budget} attempts")]
    BudgetExhausted { kind: String, budget: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
