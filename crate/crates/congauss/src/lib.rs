//! Multivariate normal priors under exact linear constraints.
//!
//! Given a full-row-rank constraint `A beta = b` and a diagonal covariance
//! `D = diag(lambda_1^2, ..., lambda_K^2)`, the conditioned prior
//!
//! ```text
//! beta ~ N( D A' (A D A')^-1 b,  D - D A' (A D A')^-1 A D )
//! ```
//!
//! concentrates on the affine subspace `{beta : A beta = b}`, so every draw
//! satisfies the constraint exactly (up to floating-point round-off). The
//! covariance is singular with rank `K - J`; sampling works by mapping
//! standard normal draws through an orthonormal basis of the null space of
//! `A` and the Cholesky factor of the reduced covariance.
//!
//! The crate provides:
//! - [`constraint`]: constraint systems and the conditional mean/covariance;
//! - [`basis`]: orthonormal null-space bases (SVD route and the closed-form
//!   sum-to-zero basis);
//! - [`sampler`]: the reduced-space sampler with reproducible counter-based
//!   random streams;
//! - [`families`]: sum-to-zero ridge, hierarchical ridge, horseshoe, and
//!   regularized-horseshoe priors;
//! - [`diagnostics`]: verification checks (constraint residuals, moments,
//!   rank, projectors) and an analytic conjugate-regression demo.
//!
//! All numeric code is generic over the scalar type via [`Real`]; `f64` is
//! the intended default and the concrete aliases at the crate root
//! ([`ConstraintSystem64`], [`ConstrainedGaussian64`], ...) use it.
//!
//! ```
//! use congauss::constraint::{ConstraintSystem, DiagonalScales};
//! use congauss::rng::RngStream;
//! use congauss::sampler::ConstrainedGaussian;
//!
//! // beta_1 + beta_2 + beta_3 = 0 with unit prior scales
//! let constraint = ConstraintSystem::<f64>::sum_to_zero(3)?;
//! let prior = ConstrainedGaussian::build(constraint, &DiagonalScales::unit(3))?;
//!
//! let stream = RngStream::new(42, 0);
//! let draws = prior.draw_batch(&stream, 100);
//! for i in 0..draws.nrows() {
//!     let total: f64 = draws.row(i).iter().sum();
//!     assert!(total.abs() < 1e-10);
//! }
//! # Ok::<(), congauss::Error>(())
//! ```

pub mod basis;
pub mod constraint;
pub mod diagnostics;
mod error;
pub mod families;
pub mod rng;
pub mod sampler;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Floating-point scalar usable for all constrained-prior math: `f32` or `f64`.
pub trait Real:
    nalgebra::RealField + num_traits::FromPrimitive + num_traits::ToPrimitive + Copy
{
    /// Machine epsilon of the scalar type.
    const EPSILON: Self;
}

impl Real for f32 {
    const EPSILON: Self = f32::EPSILON;
}

impl Real for f64 {
    const EPSILON: Self = f64::EPSILON;
}

/// Converts an `f64` constant into the working scalar type.
pub(crate) fn conv<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable in the scalar type")
}

/// Strictly positive and not NaN.
pub(crate) fn is_positive<T: Real>(v: T) -> bool {
    v > T::zero()
}

pub type ConstraintSystem64 = constraint::ConstraintSystem<f64>;
pub type DiagonalScales64 = constraint::DiagonalScales<f64>;
pub type NullBasis64 = basis::NullBasis<f64>;
pub type ConstrainedGaussian64 = sampler::ConstrainedGaussian<f64>;
pub type FamilySpec64 = families::FamilySpec<f64>;

pub type ConstraintSystem32 = constraint::ConstraintSystem<f32>;
pub type DiagonalScales32 = constraint::DiagonalScales<f32>;
pub type NullBasis32 = basis::NullBasis<f32>;
pub type ConstrainedGaussian32 = sampler::ConstrainedGaussian<f32>;
pub type FamilySpec32 = families::FamilySpec<f32>;
