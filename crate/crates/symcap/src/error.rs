use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a standard symmetry: {0}")]
    NotStandardSymmetry(String),

    #[error("unsupported tensor reduction: neither factor averages to the fully mixing map")]
    UnsupportedTensorReduction,

    #[error("unsupported direct-sum reduction: more than one component has a nonzero Haar mean")]
    UnsupportedDirectSumReduction,

    #[error("unsupported group operation: {0}")]
    UnsupportedGroup(String),

    #[error("unsupported subgroup pair: {0}")]
    UnsupportedInclusionPair(String),

    #[error("multiset is not closed under products and inverses: {0}")]
    NotAGroup(String),

    #[error("no declared symmetry group for this channel model")]
    NoDeclaredSymmetry,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
