//! Sampling from the singular constrained Gaussian.
//!
//! The covariance `cov` of a constrained system has rank `K - J`, so it
//! cannot be Cholesky-factorized directly. Instead the sampler reduces to
//! the null-space coordinates, where `omega = M' cov M` is positive
//! definite, factorizes `omega = L L'`, and maps standard normal draws
//! back: `beta = mean + M L z`. Every draw then satisfies `A beta = b` up
//! to round-off, and `M L L' M' = cov` recovers the full covariance
//! without sampling noise.

use nalgebra::{DMatrix, DVector};

use crate::basis::{svd_null_basis, sum_zero_basis, NullBasis};
use crate::constraint::{conditional_moments, symmetrize, ConstraintSystem, DiagonalScales};
use crate::rng::{standard_normal_vector, DrawRng, RngStream, Sample};
use crate::{conv, Error, Real, Result};

/// The reduced covariance `omega = M' cov M` and its lower Cholesky factor.
///
/// Factorization is attempted without modification first; on failure a single
/// retry adds `1e-12 * trace(omega) / dim` to the diagonal. Anything beyond
/// that indicates a real defect upstream and is reported as an error rather
/// than smoothed over.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFactor<T: Real> {
    omega: DMatrix<T>,
    chol_lower: DMatrix<T>,
    jittered: bool,
}

impl<T: Real> ReducedFactor<T> {
    pub fn omega(&self) -> &DMatrix<T> {
        &self.omega
    }

    /// The lower-triangular factor `L` with `L L' = omega`.
    pub fn chol_lower(&self) -> &DMatrix<T> {
        &self.chol_lower
    }

    /// True iff the diagonal jitter retry was needed.
    pub fn jittered(&self) -> bool {
        self.jittered
    }

    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }
}

/// Projects `cov` onto the basis and Cholesky-factorizes the result.
pub fn reduce_and_factor<T: Real>(
    cov: &DMatrix<T>,
    basis: &DMatrix<T>,
) -> Result<ReducedFactor<T>> {
    if cov.nrows() != basis.nrows() || !cov.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "covariance is {}x{}, basis has {} rows",
            cov.nrows(),
            cov.ncols(),
            basis.nrows()
        )));
    }
    let mut omega = basis.transpose() * cov * basis;
    symmetrize(&mut omega);
    let dim = omega.nrows();

    if let Some(chol) = nalgebra::Cholesky::new(omega.clone()) {
        return Ok(ReducedFactor {
            omega,
            chol_lower: chol.unpack(),
            jittered: false,
        });
    }

    let jitter = conv::<T>(1e-12) * omega.trace() / conv::<T>(dim as f64);
    let mut retry = omega.clone();
    for i in 0..dim {
        retry[(i, i)] += jitter;
    }
    match nalgebra::Cholesky::new(retry) {
        Some(chol) => Ok(ReducedFactor {
            omega,
            chol_lower: chol.unpack(),
            jittered: true,
        }),
        None => Err(Error::CholeskyFailure(format!(
            "reduced covariance ({dim}x{dim}) is not positive definite even with jitter {:e}",
            jitter.to_f64().unwrap_or(f64::NAN)
        ))),
    }
}

/// A constrained Gaussian prepared for repeated sampling: conditional mean
/// and covariance, null-space basis, and the reduced Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedGaussian<T: Real> {
    mean: DVector<T>,
    cov: DMatrix<T>,
    basis: NullBasis<T>,
    factor: ReducedFactor<T>,
    constraint: ConstraintSystem<T>,
}

impl<T: Real> ConstrainedGaussian<T> {
    /// Assembles mean, covariance, basis, and reduced factor once.
    ///
    /// The closed-form sum-to-zero basis is used when the constraint is,
    /// entrywise exactly, a positive multiple of the all-ones row with
    /// `b = 0`; otherwise the basis comes from the SVD of `A`.
    pub fn build(constraint: ConstraintSystem<T>, scales: &DiagonalScales<T>) -> Result<Self> {
        let basis = if constraint.is_canonical_sum_to_zero() {
            sum_zero_basis(constraint.k())?
        } else {
            svd_null_basis(&constraint)?
        };
        Self::build_with_basis(constraint, scales, basis)
    }

    /// Like [`ConstrainedGaussian::build`] but with a caller-provided basis,
    /// which must span the null space of the constraint matrix.
    pub fn build_with_basis(
        constraint: ConstraintSystem<T>,
        scales: &DiagonalScales<T>,
        basis: NullBasis<T>,
    ) -> Result<Self> {
        let k = constraint.k();
        let reduced = k - constraint.j();
        if basis.dim() != k || basis.rank() != reduced {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{}, constraint needs {}x{}",
                basis.dim(),
                basis.rank(),
                k,
                reduced
            )));
        }
        let annihilation = (constraint.a() * basis.matrix())
            .iter()
            .fold(T::zero(), |a, &x| a.max(x.abs()));
        let tol = conv::<T>(1e-10).max(T::EPSILON * conv::<T>((16 * k) as f64));
        if annihilation > tol {
            return Err(Error::InvalidShape(format!(
                "basis does not annihilate the constraint matrix (max |A M| = {:e})",
                annihilation.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let (mean, cov) = conditional_moments(&constraint, scales)?;
        let factor = reduce_and_factor(&cov, basis.matrix())?;
        Ok(Self {
            mean,
            cov,
            basis,
            factor,
            constraint,
        })
    }

    /// Conditional mean `mean = D A' (A D A')^-1 b`.
    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    /// Conditional covariance (symmetric, PSD, rank `K - J`).
    pub fn cov(&self) -> &DMatrix<T> {
        &self.cov
    }

    pub fn basis(&self) -> &NullBasis<T> {
        &self.basis
    }

    /// The lower Cholesky factor `L` of the reduced covariance.
    pub fn reduced_chol(&self) -> &DMatrix<T> {
        self.factor.chol_lower()
    }

    pub fn reduced_factor(&self) -> &ReducedFactor<T> {
        &self.factor
    }

    pub fn constraint(&self) -> &ConstraintSystem<T> {
        &self.constraint
    }

    pub fn k(&self) -> usize {
        self.constraint.k()
    }

    /// Dimension of the sampling subspace, `K - J`.
    pub fn reduced_dim(&self) -> usize {
        self.factor.dim()
    }

    /// The affine map `z -> mean + M L z`. With `z = 0` this returns the
    /// mean exactly.
    pub fn from_standard_normal(&self, z: &DVector<T>) -> DVector<T> {
        assert_eq!(
            z.len(),
            self.reduced_dim(),
            "z must have the reduced dimension K - J"
        );
        &self.mean + self.basis.matrix() * (self.factor.chol_lower() * z)
    }

    /// One draw, equal to row 0 of any batch on the same stream.
    pub fn draw(&self, stream: &RngStream) -> DVector<T>
    where
        T: Sample,
    {
        self.draw_at(stream, 0)
    }

    /// Draw `index` of the stream; a pure function of
    /// `(seed, stream_id, index)`.
    pub fn draw_at(&self, stream: &RngStream, index: u64) -> DVector<T>
    where
        T: Sample,
    {
        let mut rng = stream.substream(index);
        self.draw_with(&mut rng)
    }

    /// Draws using an already-positioned generator.
    pub fn draw_with(&self, rng: &mut DrawRng) -> DVector<T>
    where
        T: Sample,
    {
        let z = standard_normal_vector(rng, self.reduced_dim());
        self.from_standard_normal(&z)
    }

    /// `n` independent draws as an `n x K` matrix; row `i` is draw `i` of
    /// the stream.
    pub fn draw_batch(&self, stream: &RngStream, n: usize) -> DMatrix<T>
    where
        T: Sample,
    {
        let k = self.k();
        let mut out = DMatrix::<T>::zeros(n, k);
        for i in 0..n {
            let beta = self.draw_at(stream, i as u64);
            out.row_mut(i).copy_from(&beta.transpose());
        }
        out
    }
}

/// Serializes a sample matrix as CSV: one row per line, comma-separated,
/// no header, 17 significant digits (lossless for f64).
pub fn batch_to_csv<T: Real>(samples: &DMatrix<T>) -> String {
    let mut out = String::with_capacity(samples.nrows() * samples.ncols() * 26);
    for i in 0..samples.nrows() {
        for j in 0..samples.ncols() {
            if j > 0 {
                out.push(',');
            }
            let x = samples[(i, j)].to_f64().expect("sample must convert to f64");
            out.push_str(&format!("{x:.16e}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{dmatrix, dvector};

    fn sum_zero_unit(k: usize) -> ConstrainedGaussian<f64> {
        ConstrainedGaussian::build(
            ConstraintSystem::sum_to_zero(k).unwrap(),
            &DiagonalScales::unit(k),
        )
        .unwrap()
    }

    #[test]
    fn reduced_covariance_is_identity_for_unit_sum_zero() {
        let g = sum_zero_unit(3);
        let omega = g.reduced_factor().omega();
        assert_relative_eq!(omega, &DMatrix::identity(2, 2), epsilon = 1e-14);
        assert!(!g.reduced_factor().jittered());
    }

    #[test]
    fn reduced_covariance_scalar_case() {
        let c = ConstraintSystem::new(dmatrix![1.0, 1.0], dvector![0.0]).unwrap();
        let d = DiagonalScales::new(dvector![4.0, 1.0]).unwrap();
        let g = ConstrainedGaussian::build(c, &d).unwrap();
        assert_eq!(g.reduced_dim(), 1);
        assert_relative_eq!(g.reduced_factor().omega()[(0, 0)], 8.0 / 5.0, max_relative = 1e-14);
    }

    #[test]
    fn chol_factor_is_lower_with_positive_diagonal() {
        let a = dmatrix![
            0.3, -1.2, 0.7, 2.1;
            1.5, 0.2, -0.9, 0.8
        ];
        let c = ConstraintSystem::new(a, dvector![0.4, -0.7]).unwrap();
        let d = DiagonalScales::new(dvector![0.5, 2.0, 1.0, 3.0]).unwrap();
        let g = ConstrainedGaussian::build(c, &d).unwrap();
        let l = g.reduced_chol();
        for i in 0..l.nrows() {
            assert!(l[(i, i)] > 0.0);
            for j in (i + 1)..l.ncols() {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn zero_z_returns_mean_exactly() {
        let c = ConstraintSystem::new(dmatrix![1.0, 1.0], dvector![2.0]).unwrap();
        let g = ConstrainedGaussian::build(c, &DiagonalScales::unit(2)).unwrap();
        let beta = g.from_standard_normal(&DVector::zeros(1));
        assert_eq!(beta, *g.mean());
    }

    #[test]
    fn every_draw_satisfies_the_constraint() {
        let g = sum_zero_unit(5);
        let stream = RngStream::new(11, 0);
        for i in 0..200 {
            let beta = g.draw_at(&stream, i);
            let s: f64 = beta.iter().sum();
            assert!(s.abs() <= 1e-10, "draw {i} sums to {s}");
        }
    }

    #[test]
    fn batch_of_one_equals_single_draw() {
        let g = sum_zero_unit(4);
        let stream = RngStream::new(3, 9);
        let batch = g.draw_batch(&stream, 1);
        let single = g.draw(&stream);
        assert_eq!(batch.row(0).transpose(), single);
    }

    #[test]
    fn batches_are_prefix_stable_and_stream_distinct() {
        let g = sum_zero_unit(3);
        let stream = RngStream::new(5, 0);
        let big = g.draw_batch(&stream, 20);
        let small = g.draw_batch(&stream, 8);
        assert_eq!(big.rows(0, 8), small.rows(0, 8));

        let other = g.draw_batch(&RngStream::new(5, 1), 20);
        for i in 0..20 {
            for l in 0..20 {
                assert_ne!(big.row(i), other.row(l), "duplicated row across streams");
            }
        }
    }

    #[test]
    fn covariance_identity_holds_deterministically() {
        let g = sum_zero_unit(6);
        let m = g.basis().matrix();
        let l = g.reduced_chol();
        let recovered = m * (l * l.transpose()) * m.transpose();
        let err = (&recovered - g.cov()).norm() / g.cov().norm();
        assert!(err <= 1e-10, "relative Frobenius error {err}");
    }

    #[test]
    fn empirical_covariance_matches_target() {
        let g = sum_zero_unit(3);
        let n = 100_000;
        let samples = g.draw_batch(&RngStream::new(77, 0), n);
        let nf = n as f64;
        let mean = samples.row_sum() / nf;
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = 0.0;
                let mut acc_sq = 0.0;
                for i in 0..n {
                    let w = (samples[(i, a)] - mean[a]) * (samples[(i, b)] - mean[b]);
                    acc += w;
                    acc_sq += w * w;
                }
                let emp = acc / (nf - 1.0);
                let se = ((acc_sq / nf - (acc / nf) * (acc / nf)) / nf).sqrt();
                let diff = (emp - g.cov()[(a, b)]).abs();
                assert!(
                    diff <= 3.0 * se,
                    "cov[{a},{b}]: |{emp} - {}| > 3 se {se}",
                    g.cov()[(a, b)]
                );
            }
        }
    }

    #[test]
    fn csv_serialization_is_deterministic_and_lossless() {
        let g = sum_zero_unit(4);
        let stream = RngStream::new(2, 4);
        let a = batch_to_csv(&g.draw_batch(&stream, 50));
        let b = batch_to_csv(&g.draw_batch(&stream, 50));
        assert_eq!(a, b);
        for (line, i) in a.lines().zip(0u64..) {
            let parsed: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            let original = g.draw_at(&stream, i);
            assert_eq!(parsed, original.iter().copied().collect::<Vec<_>>());
        }
    }

    #[test]
    fn single_precision_pipeline_works() {
        let c = ConstraintSystem::<f32>::sum_to_zero(4).unwrap();
        let g = ConstrainedGaussian::build(c, &DiagonalScales::unit(4)).unwrap();
        let batch = g.draw_batch(&RngStream::new(6, 0), 500);
        for i in 0..batch.nrows() {
            let s: f32 = batch.row(i).iter().sum();
            assert!(s.abs() <= 1e-5, "row {i} sums to {s}");
        }
        let m = g.basis().matrix();
        let l = g.reduced_chol();
        let recovered = m * (l * l.transpose()) * m.transpose();
        let err = (&recovered - g.cov()).norm() / g.cov().norm();
        assert!(err <= 1e-5, "relative error {err}");
    }

    #[test]
    fn mismatched_basis_is_rejected() {
        let c = ConstraintSystem::new(dmatrix![1.0, 0.0, 0.0], dvector![0.0]).unwrap();
        let wrong = sum_zero_basis::<f64>(3).unwrap();
        let err = ConstrainedGaussian::build_with_basis(c, &DiagonalScales::unit(3), wrong)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidShape(_)));
    }
}
