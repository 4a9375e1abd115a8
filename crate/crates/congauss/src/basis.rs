//! Orthonormal bases for the null space `N(A) = {x : A x = 0}`.
//!
//! Two routes produce a `K x (K - J)` matrix `M` with `A M = 0` and
//! `M' M = I`:
//!
//! - [`svd_null_basis`]: works for any valid constraint system. The right
//!   singular vectors of `A` span its row space; the null basis is their
//!   orthonormal complement, completed with Householder reflections.
//! - [`sum_zero_basis`]: the closed-form basis for the all-ones row, built
//!   column by column with no decomposition, hence exactly reproducible.
//!
//! Sign and rotation of a basis are not normalized; anything observable is a
//! function of the projector `M M'`, which is basis-invariant.

use nalgebra::{DMatrix, DVector};

use crate::constraint::ConstraintSystem;
use crate::{conv, Error, Real, Result};

/// How a null-space basis was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    Svd,
    ClosedFormSumZero,
}

/// An orthonormal basis of a constraint null space.
#[derive(Debug, Clone, PartialEq)]
pub struct NullBasis<T: Real> {
    m: DMatrix<T>,
    source: BasisSource,
}

impl<T: Real> NullBasis<T> {
    fn checked(m: DMatrix<T>, source: BasisSource, a: &DMatrix<T>) -> Result<Self> {
        let k = m.nrows();
        let tol = orth_tol::<T>();
        let gram = m.transpose() * &m;
        let mut orth_err = T::zero();
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { T::one() } else { T::zero() };
                orth_err = orth_err.max((gram[(i, j)] - target).abs());
            }
        }
        if orth_err > tol {
            return Err(Error::InvalidShape(format!(
                "basis columns are not orthonormal (max deviation {:e})",
                orth_err.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let annihilation = (a * &m)
            .iter()
            .fold(T::zero(), |acc, &x| acc.max(x.abs()));
        if annihilation > tol * conv::<T>(k as f64) {
            return Err(Error::InvalidShape(format!(
                "basis does not annihilate the constraint matrix (max |A M| = {:e})",
                annihilation.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { m, source })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.m
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    /// Ambient dimension `K`.
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Null-space dimension `K - J`.
    pub fn rank(&self) -> usize {
        self.m.ncols()
    }

    /// The basis-invariant projector `M M'` onto the null space.
    pub fn projector(&self) -> DMatrix<T> {
        &self.m * self.m.transpose()
    }
}

/// Orthonormality tolerance: the stated `1e-12` bound, loosened only when the
/// scalar type cannot represent it (f32).
fn orth_tol<T: Real>() -> T {
    conv::<T>(1e-12).max(T::EPSILON * conv::<T>(16.0))
}

/// Null basis of a general constraint system via the SVD of `A`.
///
/// The thin SVD yields the `J` leading right singular vectors, which span the
/// row space of `A`; the returned basis is the orthonormal complement, i.e.
/// the span of the trailing `K - J` right singular vectors.
pub fn svd_null_basis<T: Real>(c: &ConstraintSystem<T>) -> Result<NullBasis<T>> {
    let a = c.a();
    let svd = a
        .clone()
        .try_svd(false, true, T::EPSILON, 10_000)
        .ok_or(Error::SvdFailure)?;
    let v_t = svd.v_t.expect("v_t requested");
    let row_space = v_t.transpose(); // K x J, orthonormal columns
    let m = orthonormal_complement(&row_space);
    NullBasis::checked(m, BasisSource::Svd, a)
}

/// Closed-form sum-to-zero basis for `A = (1, ..., 1)` (K >= 2).
///
/// Column `i` (1-based) has `1 / sqrt(i (i + 1))` in its first `i` rows and
/// `-i / sqrt(i (i + 1))` in row `i + 1`. Deterministic: no decomposition.
pub fn sum_zero_basis<T: Real>(k: usize) -> Result<NullBasis<T>> {
    if k < 2 {
        return Err(Error::InvalidShape(format!(
            "sum-to-zero basis needs K >= 2, got K={k}"
        )));
    }
    let mut m = DMatrix::<T>::zeros(k, k - 1);
    for i in 1..k {
        let fi = conv::<T>(i as f64);
        let scale = (fi * (fi + T::one())).sqrt();
        let positive = T::one() / scale;
        for j in 0..i {
            m[(j, i - 1)] = positive;
        }
        m[(i, i - 1)] = -fi / scale;
    }
    let ones = DMatrix::from_element(1, k, T::one());
    NullBasis::checked(m, BasisSource::ClosedFormSumZero, &ones)
}

/// Orthonormal basis of the complement of the column span of a full-column-
/// rank `K x J` matrix (J < K).
///
/// Uses Householder QR: the input is reduced to triangular form by reflectors
/// `H_0 ... H_{J-1}`, and the complement columns are `H_0 ... H_{J-1} e_i`
/// for `i = J..K`. Products of exact reflectors keep orthonormality at the
/// round-off level regardless of conditioning.
pub(crate) fn orthonormal_complement<T: Real>(v: &DMatrix<T>) -> DMatrix<T> {
    let k = v.nrows();
    let j = v.ncols();
    debug_assert!(j < k);

    let mut work = v.clone();
    // reflectors[c] is the unit Householder vector acting on rows c..k
    let mut reflectors: Vec<DVector<T>> = Vec::with_capacity(j);
    for c in 0..j {
        let len = k - c;
        let mut hv = DVector::<T>::zeros(len);
        for r in 0..len {
            hv[r] = work[(c + r, c)];
        }
        let norm = hv.norm();
        let alpha = if hv[0] >= T::zero() { -norm } else { norm };
        hv[0] -= alpha;
        let hv_norm = hv.norm();
        if hv_norm > T::zero() {
            hv /= hv_norm;
            // apply H = I - 2 v v' to the remaining columns
            for col in c..j {
                let mut dot = T::zero();
                for r in 0..len {
                    dot += hv[r] * work[(c + r, col)];
                }
                let two_dot = dot + dot;
                for r in 0..len {
                    work[(c + r, col)] -= two_dot * hv[r];
                }
            }
        } else {
            hv.fill(T::zero());
        }
        reflectors.push(hv);
    }

    let mut out = DMatrix::<T>::zeros(k, k - j);
    for (idx, col) in (j..k).enumerate() {
        let mut q = DVector::<T>::zeros(k);
        q[col] = T::one();
        for c in (0..j).rev() {
            let hv = &reflectors[c];
            let len = k - c;
            let mut dot = T::zero();
            for r in 0..len {
                dot += hv[r] * q[c + r];
            }
            let two_dot = dot + dot;
            for r in 0..len {
                q[c + r] -= two_dot * hv[r];
            }
        }
        out.set_column(idx, &q);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{dmatrix, dvector};

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
    }

    #[test]
    fn svd_basis_single_sum_row() {
        let c = ConstraintSystem::<f64>::new(dmatrix![1.0, 1.0], dvector![0.0]).unwrap();
        let basis = svd_null_basis(&c).unwrap();
        let m = basis.matrix();
        assert_eq!(m.shape(), (2, 1));
        assert_relative_eq!(m[(0, 0)].abs(), 1.0 / 2.0_f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(m[(0, 0)], -m[(1, 0)], max_relative = 1e-14);
    }

    #[test]
    fn svd_basis_coordinate_constraint() {
        let c = ConstraintSystem::<f64>::new(dmatrix![1.0, 0.0, 0.0], dvector![0.0]).unwrap();
        let basis = svd_null_basis(&c).unwrap();
        let m = basis.matrix();
        assert_eq!(m.shape(), (3, 2));
        // null space is {x : x_1 = 0}
        assert!(m.row(0).iter().all(|&x| x.abs() <= 1e-13));
        let gram = m.transpose() * m;
        assert_relative_eq!(gram, DMatrix::identity(2, 2), epsilon = 1e-13);
    }

    #[test]
    fn svd_basis_annihilates_random_system() {
        // fixed full-row-rank 2 x 5 matrix
        let a = dmatrix![
            0.3, -1.2, 0.7, 2.1, -0.4;
            1.5, 0.2, -0.9, 0.8, 1.1
        ];
        let c = ConstraintSystem::new(a.clone(), dvector![0.0, 0.0]).unwrap();
        let basis = svd_null_basis(&c).unwrap();
        assert_eq!(basis.matrix().shape(), (5, 3));
        assert!(max_abs(&(a * basis.matrix())) <= 1e-12 * 5.0);
    }

    #[test]
    fn closed_form_k2() {
        let basis = sum_zero_basis::<f64>(2).unwrap();
        let m = basis.matrix();
        let s = 1.0 / 2.0_f64.sqrt();
        assert_relative_eq!(m[(0, 0)], s, max_relative = 1e-15);
        assert_relative_eq!(m[(1, 0)], -s, max_relative = 1e-15);
    }

    #[test]
    fn closed_form_k3() {
        let basis = sum_zero_basis::<f64>(3).unwrap();
        let m = basis.matrix();
        let c0 = 1.0 / 2.0_f64.sqrt();
        let c1 = 1.0 / 6.0_f64.sqrt();
        assert_relative_eq!(m[(0, 0)], c0, max_relative = 1e-15);
        assert_relative_eq!(m[(1, 0)], -c0, max_relative = 1e-15);
        assert_eq!(m[(2, 0)], 0.0);
        assert_relative_eq!(m[(0, 1)], c1, max_relative = 1e-15);
        assert_relative_eq!(m[(1, 1)], c1, max_relative = 1e-15);
        assert_relative_eq!(m[(2, 1)], -2.0 * c1, max_relative = 1e-15);
    }

    #[test]
    fn closed_form_invalid_k() {
        assert!(matches!(
            sum_zero_basis::<f64>(1),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn closed_form_column_sums_and_orthonormality() {
        for k in [2usize, 3, 5, 17, 64] {
            let basis = sum_zero_basis::<f64>(k).unwrap();
            let m = basis.matrix();
            for col in 0..k - 1 {
                let s: f64 = m.column(col).iter().sum();
                assert!(s.abs() <= 1e-12, "column {col} of K={k} sums to {s}");
            }
            let gram = m.transpose() * m;
            assert_relative_eq!(gram, DMatrix::identity(k - 1, k - 1), epsilon = 1e-12);
        }
    }

    #[test]
    fn projectors_agree_between_routes() {
        for k in [2usize, 3, 8, 33] {
            let c = ConstraintSystem::sum_to_zero(k).unwrap();
            let p_svd = svd_null_basis(&c).unwrap().projector();
            let p_closed = sum_zero_basis::<f64>(k).unwrap().projector();
            assert!(max_abs(&(p_svd - p_closed)) <= 1e-10, "K={k}");
        }
    }

    #[test]
    fn complement_handles_wide_gap_dimensions() {
        // J = 3 rows, K = 7: complement must produce 4 orthonormal columns
        let a = dmatrix![
            1.0, 0.5, -0.3, 0.0, 2.0, -1.0, 0.25;
            0.0, 1.0, 0.75, -2.0, 0.5, 0.0, -0.5;
            -1.0, 0.0, 1.0, 1.0, 0.0, 3.0, 0.125
        ];
        let c = ConstraintSystem::new(a.clone(), dvector![0.0, 0.0, 0.0]).unwrap();
        let basis = svd_null_basis(&c).unwrap();
        assert_eq!(basis.matrix().shape(), (7, 4));
        assert!(max_abs(&(a * basis.matrix())) <= 1e-12 * 7.0);
        let gram = basis.matrix().transpose() * basis.matrix();
        assert_relative_eq!(gram, DMatrix::identity(4, 4), epsilon = 1e-12);
    }
}
