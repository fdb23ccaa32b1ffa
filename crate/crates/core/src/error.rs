use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("operation requires a nonzero subspace")]
    ZeroSubspace,

    #[error("operator chain is empty")]
    EmptyChain,

    #[error("hyperplane normal must be nonzero")]
    ZeroNormal,

    #[error("subspaces are not orthogonal (max |Q_Uᵀ Q_V| = {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },

    #[error("{what} out of range: {value} not in [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("the odd-sum bound needs an odd number of subspaces, got {0}")]
    EvenChain(usize),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
