//! Constraint systems and the conditional moments of a diagonal Gaussian
//! restricted to the affine subspace `A beta = b`.

use nalgebra::{DMatrix, DVector};

use crate::{conv, is_positive, Error, Real, Result};

/// A linear constraint `A beta = b` with `A` (J x K) of full row rank and
/// `1 <= J <= K - 1`.
///
/// Validation happens at construction: shapes are checked first against `b`,
/// then the numerical rank of `A` is computed from its singular values, and
/// finally the row count is required to leave at least one free dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem<T: Real> {
    a: DMatrix<T>,
    b: DVector<T>,
}

impl<T: Real> ConstraintSystem<T> {
    /// Builds and validates a constraint system.
    pub fn new(a: DMatrix<T>, b: DVector<T>) -> Result<Self> {
        let (j, k) = a.shape();
        if j == 0 || k == 0 {
            return Err(Error::InvalidShape(
                "constraint matrix must be non-empty".into(),
            ));
        }
        if b.len() != j {
            return Err(Error::DimensionMismatch(format!(
                "constraint vector has length {}, expected {} (one entry per row of A)",
                b.len(),
                j
            )));
        }
        let rank = rank_of(&a);
        if rank < j {
            return Err(Error::RankDeficient { rank, rows: j });
        }
        if j >= k {
            return Err(Error::InvalidShape(format!(
                "row count J={j} must satisfy 1 <= J <= K-1 with K={k}"
            )));
        }
        Ok(Self { a, b })
    }

    /// The canonical sum-to-zero system: `A = (1, 1, ..., 1)`, `b = 0`.
    pub fn sum_to_zero(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidShape(format!(
                "sum-to-zero constraint needs K >= 2, got K={k}"
            )));
        }
        Self::new(
            DMatrix::from_element(1, k, T::one()),
            DVector::zeros(1),
        )
    }

    pub fn a(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &DVector<T> {
        &self.b
    }

    /// Number of constraint rows, `J`.
    pub fn j(&self) -> usize {
        self.a.nrows()
    }

    /// Number of coefficients, `K`.
    pub fn k(&self) -> usize {
        self.a.ncols()
    }

    /// True iff `A` is, entrywise exactly, a positive multiple of the all-ones
    /// row and `b = 0`. This is the case where the closed-form sum-to-zero
    /// basis applies.
    pub fn is_canonical_sum_to_zero(&self) -> bool {
        if self.j() != 1 || self.b[0] != T::zero() {
            return false;
        }
        let first = self.a[(0, 0)];
        first > T::zero() && self.a.iter().all(|&x| x == first)
    }

    /// Max-abs entry of `A beta - b`.
    pub fn residual_inf(&self, beta: &DVector<T>) -> T {
        let r = &self.a * beta - &self.b;
        r.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }
}

/// The diagonal `D = diag(lambda_1^2, ..., lambda_K^2)` of the unconstrained
/// prior. Entries are variances and must be strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalScales<T: Real> {
    lambda_sq: DVector<T>,
}

impl<T: Real> DiagonalScales<T> {
    /// Validates that every entry is strictly positive (zero is rejected).
    pub fn new(lambda_sq: DVector<T>) -> Result<Self> {
        if lambda_sq.is_empty() {
            return Err(Error::InvalidShape("scale vector must be non-empty".into()));
        }
        if let Some((i, &v)) = lambda_sq.iter().enumerate().find(|(_, &v)| !is_positive(v)) {
            return Err(Error::InvalidScale(format!(
                "lambda_sq[{i}] = {:?} must be strictly positive",
                v.to_f64()
            )));
        }
        Ok(Self { lambda_sq })
    }

    /// Unit scales, `D = I_k`.
    pub fn unit(k: usize) -> Self {
        Self {
            lambda_sq: DVector::from_element(k, T::one()),
        }
    }

    pub fn len(&self) -> usize {
        self.lambda_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda_sq.is_empty()
    }

    pub fn values(&self) -> &DVector<T> {
        &self.lambda_sq
    }
}

/// Conditional mean and covariance of `beta ~ N(0, D)` given `A beta = b`:
///
/// ```text
/// mean = D A' (A D A')^-1 b
/// cov  = D - D A' (A D A')^-1 A D
/// ```
///
/// The J x J system `A D A'` is solved through its Cholesky factor rather
/// than inverted. The covariance is assembled in factored form: with `Q` an
/// orthonormal basis of the complement of `range(D^(1/2) A')`,
///
/// ```text
/// cov = (D^(1/2) Q) (D^(1/2) Q)'
/// ```
///
/// which equals the formula above exactly and keeps the trailing `J`
/// singular values at the round-off floor of `sigma_max` (an entrywise
/// subtraction would leave noise at the scale of `max_k lambda_k^2` instead,
/// breaking the rank law for strongly spread scales). The returned
/// covariance is symmetrized. With `b = 0` the mean is exactly the zero
/// vector.
pub fn conditional_moments<T: Real>(
    c: &ConstraintSystem<T>,
    d: &DiagonalScales<T>,
) -> Result<(DVector<T>, DMatrix<T>)> {
    let k = c.k();
    if d.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "scale vector has length {}, constraint has K={}",
            d.len(),
            k
        )));
    }

    let sqrt_d: DVector<T> = d.values().map(|s| s.sqrt());

    // bt = D^(1/2) A'  (K x J)
    let mut bt = c.a().transpose();
    for (row, &s) in sqrt_d.iter().enumerate() {
        bt.row_mut(row).scale_mut(s);
    }

    let gram = bt.transpose() * &bt; // A D A', J x J, SPD by construction
    let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| {
        Error::SingularSystem("A D A^T is not positive definite; constraint invariants are violated".into())
    })?;

    // mean = D^(1/2) bt (A D A')^-1 b
    let mut mean = &bt * chol.solve(c.b());
    for (i, &s) in sqrt_d.iter().enumerate() {
        mean[i] *= s;
    }

    // f = D^(1/2) Q with Q spanning the complement of range(D^(1/2) A')
    let mut f = crate::basis::orthonormal_complement(&bt);
    for (row, &s) in sqrt_d.iter().enumerate() {
        f.row_mut(row).scale_mut(s);
    }
    let mut cov = &f * f.transpose();
    symmetrize(&mut cov);

    Ok((mean, cov))
}

/// Numerical rank: the number of singular values above
/// `max(nrows, ncols) * eps * sigma_max`.
pub fn rank_of<T: Real>(m: &DMatrix<T>) -> usize {
    let sv = m
        .clone()
        .try_svd(false, false, T::EPSILON, 0)
        .expect("svd with unbounded iterations converges")
        .singular_values;
    let smax = sv.iter().fold(T::zero(), |a, &s| a.max(s));
    let dim = conv::<T>(m.nrows().max(m.ncols()) as f64);
    let tol = dim * T::EPSILON * smax;
    sv.iter().filter(|&&s| s > tol).count()
}

/// Replaces `m` by `(m + m') / 2`.
pub(crate) fn symmetrize<T: Real>(m: &mut DMatrix<T>) {
    let half = conv::<T>(0.5);
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            let v = (m[(i, j)] + m[(j, i)]) * half;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}
