//! Error type shared across the crate.

/// Errors reported by constraint validation, factorization, and sampling.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two inputs disagree on a dimension (rows, columns, or length).
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A shape precondition is violated (empty matrix, J outside 1..=K-1, K too small).
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// The constraint matrix has numerical rank below its row count.
    #[error("rank deficient: numerical rank {rank} is below row count {rows}")]
    RankDeficient { rank: usize, rows: usize },

    /// The J x J system A D A^T could not be factorized; upstream invariants are broken.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// The SVD backend did not converge.
    #[error("svd did not converge")]
    SvdFailure,

    /// The reduced covariance was not numerically positive definite, even after
    /// the single permitted jitter retry.
    #[error("cholesky factorization failed: {0}")]
    CholeskyFailure(String),

    /// A scale parameter (variance, standard deviation, degrees of freedom) is not
    /// strictly positive.
    #[error("invalid scale: {0}")]
    InvalidScale(String),
}
