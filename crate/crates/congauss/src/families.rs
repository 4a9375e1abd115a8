//! Sum-to-zero shrinkage families.
//!
//! Four specializations of the constrained prior with `A = (1, ..., 1)` and
//! `b = 0`:
//!
//! - ridge: `D = I`, rescaled by `K / (K - 1)` so every marginal variance is
//!   exactly 1;
//! - hierarchical ridge: a global half-Cauchy scale `lambda`, applied
//!   non-centered as `beta = lambda * beta_ridge`;
//! - horseshoe: per-coefficient half-Cauchy scales `lambda_k` and a global
//!   half-Cauchy `tau`, applied non-centered;
//! - regularized horseshoe (RHS): half-Student-t locals `zeta_k` whose slab
//!   width `c` bounds large coefficients through
//!   `zeta_tilde_k^2 = c^2 zeta_k^2 / (c^2 + tau^2 zeta_k^2)`.
//!
//! Within one draw the variate order is fixed: local scales first, then the
//! slab variance (RHS only), then the global scale, then the `K - 1`
//! standard normals for the constrained Gaussian. Hyperparameter draws
//! change `D`, so the reduced factor is rebuilt per draw; the closed-form
//! basis is computed once per `K`.

use nalgebra::{DMatrix, DVector};

use crate::basis::{sum_zero_basis, NullBasis};
use crate::constraint::{conditional_moments, ConstraintSystem, DiagonalScales};
use crate::rng::{standard_normal_vector, DrawRng, RngStream, Sample};
use crate::sampler::{reduce_and_factor, ConstrainedGaussian};
use crate::{conv, is_positive, Error, Real, Result};

/// The four supported shrinkage families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ridge,
    HierRidge,
    Horseshoe,
    Rhs,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ridge" => Ok(Family::Ridge),
            "hier-ridge" | "hierarchical-ridge" => Ok(Family::HierRidge),
            "horseshoe" => Ok(Family::Horseshoe),
            "rhs" | "regularized-horseshoe" => Ok(Family::Rhs),
            other => Err(Error::InvalidShape(format!("unknown family '{other}'"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Family::Ridge => "ridge",
            Family::HierRidge => "hier-ridge",
            Family::Horseshoe => "horseshoe",
            Family::Rhs => "rhs",
        };
        f.write_str(name)
    }
}

/// Regularized-horseshoe hyperparameters.
///
/// `p0` is the prior belief on the number of non-zero coefficients,
/// `sigma_tilde` the pseudo standard deviation implied by the likelihood
/// (user supplied), and `n_obs` the sample size; together they set the
/// global scale `tau0 = p0 / (K - p0) * sigma_tilde / sqrt(n_obs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsParams<T: Real> {
    pub nu1: T,
    pub nu2: T,
    pub s_sq: T,
    pub nu3: T,
    pub p0: usize,
    pub sigma_tilde: T,
    pub n_obs: usize,
}

impl<T: Real> RhsParams<T> {
    /// Conventional defaults: `nu1 = 1` (half-Cauchy locals), `nu2 = 4`,
    /// `s_sq = 4`, `nu3 = 4`.
    pub fn new(p0: usize, sigma_tilde: T, n_obs: usize) -> Self {
        Self {
            nu1: T::one(),
            nu2: conv(4.0),
            s_sq: conv(4.0),
            nu3: conv(4.0),
            p0,
            sigma_tilde,
            n_obs,
        }
    }
}

/// A shrinkage family plus everything needed to draw from it.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec<T: Real> {
    pub family: Family,
    pub k: usize,
    /// Rescale `D` by `K / (K - 1)` to compensate the marginal variance lost
    /// to the constraint. Defaults to on; exact only under equal scales.
    pub compensate: bool,
    pub rhs: Option<RhsParams<T>>,
}

impl<T: Real> FamilySpec<T> {
    pub fn ridge(k: usize) -> Self {
        Self { family: Family::Ridge, k, compensate: true, rhs: None }
    }

    pub fn hier_ridge(k: usize) -> Self {
        Self { family: Family::HierRidge, k, compensate: true, rhs: None }
    }

    pub fn horseshoe(k: usize) -> Self {
        Self { family: Family::Horseshoe, k, compensate: true, rhs: None }
    }

    pub fn rhs(k: usize, params: RhsParams<T>) -> Self {
        Self { family: Family::Rhs, k, compensate: true, rhs: Some(params) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidShape(format!(
                "family {} needs K >= 2, got K={}",
                self.family, self.k
            )));
        }
        match (self.family, &self.rhs) {
            (Family::Rhs, None) => Err(Error::InvalidShape(
                "family rhs requires RHS hyperparameters".into(),
            )),
            (Family::Rhs, Some(p)) => {
                if p.p0 < 1 || p.p0 > self.k - 1 {
                    return Err(Error::InvalidShape(format!(
                        "p0={} must lie in 1..={}",
                        p.p0,
                        self.k - 1
                    )));
                }
                for (name, v) in [
                    ("nu1", p.nu1),
                    ("nu2", p.nu2),
                    ("s_sq", p.s_sq),
                    ("nu3", p.nu3),
                    ("sigma_tilde", p.sigma_tilde),
                ] {
                    if !is_positive(v) {
                        return Err(Error::InvalidScale(format!(
                            "rhs parameter {name} must be strictly positive"
                        )));
                    }
                }
                if p.n_obs < 1 {
                    return Err(Error::InvalidShape("rhs n_obs must be >= 1".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// One realization of the hyperpriors backing a draw.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperDraw<T: Real> {
    /// Local scales: `lambda_k` for the horseshoe, `zeta_k` for RHS, the
    /// single global `lambda` (length 1) for the hierarchical ridge.
    pub lambda_local: DVector<T>,
    /// Global scale `tau` (1 for families without one).
    pub tau: T,
    /// Slab variance `c^2` (RHS only).
    pub c_sq: Option<T>,
}

/// Prepared sum-to-zero machinery for a fixed `K`: the constraint row and
/// the closed-form basis, shared across per-draw covariance rebuilds.
#[derive(Debug, Clone)]
pub struct SumZeroPrior<T: Real> {
    constraint: ConstraintSystem<T>,
    basis: NullBasis<T>,
}

impl<T: Real> SumZeroPrior<T> {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self {
            constraint: ConstraintSystem::sum_to_zero(k)?,
            basis: sum_zero_basis(k)?,
        })
    }

    pub fn k(&self) -> usize {
        self.constraint.k()
    }

    pub fn basis(&self) -> &NullBasis<T> {
        &self.basis
    }

    fn scaled(&self, lambda_sq: &DVector<T>, compensate: bool) -> Result<DiagonalScales<T>> {
        if lambda_sq.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "scale vector has length {}, prior has K={}",
                lambda_sq.len(),
                self.k()
            )));
        }
        let diag = if compensate {
            lambda_sq * compensation_factor::<T>(self.k())
        } else {
            lambda_sq.clone()
        };
        DiagonalScales::new(diag)
    }

    /// The full conditional Gaussian for fixed local variances, reusing the
    /// cached basis. `tau` is excluded (non-centered): scale draws by the
    /// global scale afterwards.
    pub fn conditional(
        &self,
        lambda_sq: &DVector<T>,
        compensate: bool,
    ) -> Result<ConstrainedGaussian<T>> {
        let d = self.scaled(lambda_sq, compensate)?;
        ConstrainedGaussian::build_with_basis(self.constraint.clone(), &d, self.basis.clone())
    }

    /// One constrained draw for fixed local variances without assembling a
    /// full `ConstrainedGaussian` (the per-draw path of the hyperprior
    /// samplers; mean is zero since `b = 0`).
    fn draw_conditional(
        &self,
        lambda_sq: &DVector<T>,
        compensate: bool,
        rng: &mut DrawRng,
    ) -> Result<DVector<T>>
    where
        T: Sample,
    {
        let d = self.scaled(lambda_sq, compensate)?;
        let (_, cov) = conditional_moments(&self.constraint, &d)?;
        let factor = reduce_and_factor(&cov, self.basis.matrix())?;
        let z = standard_normal_vector(rng, self.k() - 1);
        Ok(self.basis.matrix() * (factor.chol_lower() * z))
    }
}

/// `K / (K - 1)`, the diagonal rescaling that restores the marginal variance
/// lost by conditioning (exact when all scales are equal).
pub fn compensation_factor<T: Real>(k: usize) -> T {
    conv::<T>(k as f64) / conv::<T>((k - 1) as f64)
}

/// The sum-to-zero ridge covariance `(K / (K - 1)) (I - 11'/K)`: unit
/// diagonal, off-diagonal `-1 / (K - 1)`, zero row sums.
pub fn ridge_covariance<T: Real>(k: usize) -> Result<DMatrix<T>> {
    if k < 2 {
        return Err(Error::InvalidShape(format!(
            "ridge covariance needs K >= 2, got K={k}"
        )));
    }
    let off = -T::one() / conv::<T>((k - 1) as f64);
    Ok(DMatrix::from_fn(k, k, |i, j| if i == j { T::one() } else { off }))
}

/// The ridge prior as a reusable constrained Gaussian (`D = (K/(K-1)) I`).
pub fn ridge_gaussian<T: Real>(k: usize) -> Result<ConstrainedGaussian<T>> {
    SumZeroPrior::new(k)?.conditional(&DVector::from_element(k, T::one()), true)
}

/// One draw from the sum-to-zero ridge: `sum_k beta_k = 0` and every
/// marginal is standard normal.
pub fn ridge_sample<T: Sample>(k: usize, stream: &RngStream) -> Result<DVector<T>> {
    let prior = SumZeroPrior::new(k)?;
    let mut rng = stream.substream(0);
    prior.draw_conditional(&DVector::from_element(k, T::one()), true, &mut rng)
}

/// One draw from the hierarchical ridge: `lambda ~ Cauchy+(0,1)` and
/// `beta = lambda * beta_ridge` (non-centered).
pub fn hier_ridge_sample<T: Sample>(k: usize, stream: &RngStream) -> Result<(DVector<T>, T)> {
    let prior = SumZeroPrior::new(k)?;
    let mut rng = stream.substream(0);
    let lambda = half_cauchy_draw::<T>(&mut rng);
    let base = prior.draw_conditional(&DVector::from_element(k, T::one()), true, &mut rng)?;
    Ok((base * lambda, lambda))
}

/// Closed-form horseshoe covariance for fixed scales:
/// diagonal `tau^2 (lambda_k^2 - lambda_k^4 / sum_l lambda_l^2)`,
/// off-diagonal `-tau^2 lambda_k^2 lambda_j^2 / sum_l lambda_l^2`.
/// With `compensate` the diagonal matrix `D` is first rescaled by
/// `K / (K - 1)`, which multiplies the whole covariance by that factor.
pub fn horseshoe_covariance<T: Real>(
    lambda_sq: &DVector<T>,
    tau: T,
    compensate: bool,
) -> Result<DMatrix<T>> {
    let k = lambda_sq.len();
    if k < 2 {
        return Err(Error::InvalidShape(format!(
            "horseshoe covariance needs K >= 2, got K={k}"
        )));
    }
    if !is_positive(tau) {
        return Err(Error::InvalidScale("tau must be strictly positive".into()));
    }
    if lambda_sq.iter().any(|&v| !is_positive(v)) {
        return Err(Error::InvalidScale(
            "every lambda_k^2 must be strictly positive".into(),
        ));
    }
    let factor = if compensate {
        compensation_factor::<T>(k)
    } else {
        T::one()
    };
    let d: DVector<T> = lambda_sq.map(|v| factor * tau * tau * v);
    let total = d.sum();
    Ok(DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            d[i] * (T::one() - d[i] / total)
        } else {
            -d[i] * d[j] / total
        }
    }))
}

/// The conditional horseshoe law for fixed local scales (unit global scale;
/// scale draws by `tau` afterwards).
pub fn horseshoe_conditional<T: Real>(
    lambda_sq: &DVector<T>,
    compensate: bool,
) -> Result<ConstrainedGaussian<T>> {
    if lambda_sq.iter().any(|&v| !is_positive(v)) {
        return Err(Error::InvalidScale(
            "every lambda_k^2 must be strictly positive".into(),
        ));
    }
    SumZeroPrior::new(lambda_sq.len())?.conditional(lambda_sq, compensate)
}

/// One draw from the sum-to-zero horseshoe: `lambda_k, tau ~ Cauchy+(0,1)`,
/// `beta = tau * beta_cond` with the conditional built from
/// `D = diag(lambda^2)`.
pub fn horseshoe_sample<T: Sample>(
    k: usize,
    stream: &RngStream,
    compensate: bool,
) -> Result<(DVector<T>, HyperDraw<T>)> {
    let prior = SumZeroPrior::new(k)?;
    let mut rng = stream.substream(0);
    horseshoe_draw_with(&prior, compensate, &mut rng)
}

fn horseshoe_draw_with<T: Sample>(
    prior: &SumZeroPrior<T>,
    compensate: bool,
    rng: &mut DrawRng,
) -> Result<(DVector<T>, HyperDraw<T>)> {
    let k = prior.k();
    let lambda = DVector::from_fn(k, |_, _| half_cauchy_draw::<T>(rng));
    let tau = half_cauchy_draw::<T>(rng);
    let lambda_sq = lambda.map(|x| x * x);
    let beta = prior.draw_conditional(&lambda_sq, compensate, rng)? * tau;
    Ok((
        beta,
        HyperDraw {
            lambda_local: lambda,
            tau,
            c_sq: None,
        },
    ))
}

/// The regularized local variance
/// `zeta_tilde^2 = c^2 zeta^2 / (c^2 + tau^2 zeta^2)`:
/// increasing in `zeta^2` and bounded above by `c^2 / tau^2`.
pub fn rhs_local_scale<T: Real>(zeta_sq: T, c_sq: T, tau: T) -> Result<T> {
    for (name, v) in [("zeta_sq", zeta_sq), ("c_sq", c_sq), ("tau", tau)] {
        if !is_positive(v) {
            return Err(Error::InvalidScale(format!(
                "{name} must be strictly positive"
            )));
        }
    }
    Ok(c_sq * zeta_sq / (c_sq + tau * tau * zeta_sq))
}

/// The RHS global-scale reference `tau0 = p0 / (K - p0) * sigma_tilde / sqrt(n)`.
pub fn rhs_tau0<T: Real>(spec: &FamilySpec<T>) -> Result<T> {
    spec.validate()?;
    let p = spec
        .rhs
        .as_ref()
        .ok_or_else(|| Error::InvalidShape("rhs parameters missing".into()))?;
    let p0 = conv::<T>(p.p0 as f64);
    let k = conv::<T>(spec.k as f64);
    let n = conv::<T>(p.n_obs as f64);
    Ok(p0 / (k - p0) * p.sigma_tilde / n.sqrt())
}

/// The conditional RHS law for fixed hyper values: `D = diag(zeta_tilde^2)`
/// with compensation, unit global scale (scale by `tau` afterwards).
pub fn rhs_conditional<T: Real>(
    spec: &FamilySpec<T>,
    zeta: &DVector<T>,
    c_sq: T,
    tau: T,
) -> Result<ConstrainedGaussian<T>> {
    spec.validate()?;
    if zeta.len() != spec.k {
        return Err(Error::DimensionMismatch(format!(
            "zeta has length {}, spec has K={}",
            zeta.len(),
            spec.k
        )));
    }
    let mut zt_sq = DVector::zeros(spec.k);
    for i in 0..spec.k {
        zt_sq[i] = rhs_local_scale(zeta[i] * zeta[i], c_sq, tau)?;
    }
    SumZeroPrior::new(spec.k)?.conditional(&zt_sq, spec.compensate)
}

/// One draw from the sum-to-zero regularized horseshoe.
///
/// `zeta_k ~ Student-t+_{nu1}(0, 1)`, `c^2 ~ Inv-Gamma(nu2/2, nu2 s^2/2)`,
/// `tau ~ Student-t+_{nu3}(0, tau0)`; `beta = tau * beta_cond` with the
/// conditional built from `D = diag(zeta_tilde^2)`.
pub fn rhs_sample<T: Sample>(
    spec: &FamilySpec<T>,
    stream: &RngStream,
) -> Result<(DVector<T>, HyperDraw<T>)> {
    spec.validate()?;
    let prior = SumZeroPrior::new(spec.k)?;
    let mut rng = stream.substream(0);
    rhs_draw_with(spec, &prior, &mut rng)
}

fn rhs_draw_with<T: Sample>(
    spec: &FamilySpec<T>,
    prior: &SumZeroPrior<T>,
    rng: &mut DrawRng,
) -> Result<(DVector<T>, HyperDraw<T>)> {
    let p = spec.rhs.as_ref().expect("validated");
    let k = spec.k;
    let two = conv::<T>(2.0);
    let zeta = DVector::from_fn(k, |_, _| half_student_t_draw::<T>(rng, p.nu1, T::one()));
    let c_sq = inv_gamma_draw::<T>(rng, p.nu2 / two, p.nu2 * p.s_sq / two);
    let tau0 = rhs_tau0(spec)?;
    let tau = half_student_t_draw::<T>(rng, p.nu3, tau0);
    let mut zt_sq = DVector::zeros(k);
    for i in 0..k {
        zt_sq[i] = rhs_local_scale(zeta[i] * zeta[i], c_sq, tau)?;
    }
    let beta = prior.draw_conditional(&zt_sq, spec.compensate, rng)? * tau;
    Ok((
        beta,
        HyperDraw {
            lambda_local: zeta,
            tau,
            c_sq: Some(c_sq),
        },
    ))
}

/// A batch of `n` draws from a family as an `n x K` matrix; row `i` is a
/// pure function of `(seed, stream_id, i)`.
pub fn sample_batch<T: Sample>(
    spec: &FamilySpec<T>,
    stream: &RngStream,
    n: usize,
) -> Result<DMatrix<T>> {
    spec.validate()?;
    let prior = SumZeroPrior::new(spec.k)?;
    let mut out = DMatrix::<T>::zeros(n, spec.k);

    // Fixed-D families build the factor once.
    let fixed = match spec.family {
        Family::Ridge | Family::HierRidge => Some(prior.conditional(
            &DVector::from_element(spec.k, T::one()),
            spec.compensate,
        )?),
        _ => None,
    };

    for i in 0..n {
        let mut rng = stream.substream(i as u64);
        let beta = match spec.family {
            Family::Ridge => fixed.as_ref().expect("built").draw_with(&mut rng),
            Family::HierRidge => {
                let lambda = half_cauchy_draw::<T>(&mut rng);
                fixed.as_ref().expect("built").draw_with(&mut rng) * lambda
            }
            Family::Horseshoe => horseshoe_draw_with(&prior, spec.compensate, &mut rng)?.0,
            Family::Rhs => rhs_draw_with(spec, &prior, &mut rng)?.0,
        };
        out.row_mut(i).copy_from(&beta.transpose());
    }
    Ok(out)
}

/// Hyperprior distributions available through [`hyper_draws`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HyperDist<T: Real> {
    /// Half-Cauchy(0, 1), drawn as `tan(pi u / 2)` with `u ~ U(0, 1)`.
    HalfCauchy,
    /// |scale * t_df|.
    HalfStudentT { df: T, scale: T },
    /// Inverse gamma with the given shape and rate, drawn as
    /// `rate / Gamma(shape, 1)`.
    InvGamma { shape: T, rate: T },
}

/// `n` positive hyperprior draws, consumed sequentially from substream 0.
pub fn hyper_draws<T: Sample>(
    stream: &RngStream,
    dist: HyperDist<T>,
    n: usize,
) -> Result<Vec<T>> {
    match dist {
        HyperDist::HalfCauchy => {}
        HyperDist::HalfStudentT { df, scale } => {
            for (name, v) in [("df", df), ("scale", scale)] {
                if !is_positive(v) {
                    return Err(Error::InvalidScale(format!(
                        "{name} must be strictly positive"
                    )));
                }
            }
        }
        HyperDist::InvGamma { shape, rate } => {
            for (name, v) in [("shape", shape), ("rate", rate)] {
                if !is_positive(v) {
                    return Err(Error::InvalidScale(format!(
                        "{name} must be strictly positive"
                    )));
                }
            }
        }
    }
    let mut rng = stream.substream(0);
    Ok((0..n)
        .map(|_| match dist {
            HyperDist::HalfCauchy => half_cauchy_draw::<T>(&mut rng),
            HyperDist::HalfStudentT { df, scale } => half_student_t_draw::<T>(&mut rng, df, scale),
            HyperDist::InvGamma { shape, rate } => inv_gamma_draw::<T>(&mut rng, shape, rate),
        })
        .collect())
}

/// Half-Cauchy(0, 1) via the inverse CDF `tan(pi u / 2)`, with `u` drawn
/// from the open interval so the result is strictly positive and finite.
pub(crate) fn half_cauchy_draw<T: Sample>(rng: &mut DrawRng) -> T {
    let u = T::open_unit(rng);
    (T::pi() * u / conv::<T>(2.0)).tan()
}

pub(crate) fn half_student_t_draw<T: Sample>(rng: &mut DrawRng, df: T, scale: T) -> T {
    (scale * T::student_t(rng, df)).abs()
}

/// Inverse gamma in shape/rate form: `rate / g` with `g ~ Gamma(shape, 1)`.
pub(crate) fn inv_gamma_draw<T: Sample>(rng: &mut DrawRng, shape: T, rate: T) -> T {
    rate / T::gamma(rng, shape, T::one())
}

/// Max scale-normalized constraint residual over `m` full hyperprior draws,
/// with the per-family threshold it is held to. Residuals are divided by the
/// draw's own scale (`lambda K` for the hierarchical ridge, `tau lambda_max K`
/// for the horseshoe, `tau zeta_tilde_max K` for RHS) since the constraint is
/// scale-equivariant.
pub(crate) fn normalized_residual_stat<T: Sample>(
    spec: &FamilySpec<T>,
    stream: &RngStream,
    m: usize,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let prior = SumZeroPrior::new(spec.k)?;
    let ones = DVector::from_element(spec.k, T::one());
    let fixed = match spec.family {
        Family::Ridge | Family::HierRidge => Some(prior.conditional(&ones, spec.compensate)?),
        _ => None,
    };
    let kf = spec.k as f64;
    let mut worst = 0.0_f64;
    for i in 0..m {
        let mut rng = stream.substream(i as u64);
        let (beta, scale) = match spec.family {
            Family::Ridge => (fixed.as_ref().expect("built").draw_with(&mut rng), 1.0),
            Family::HierRidge => {
                let lambda = half_cauchy_draw::<T>(&mut rng);
                (
                    fixed.as_ref().expect("built").draw_with(&mut rng) * lambda,
                    lambda.to_f64().unwrap_or(f64::NAN) * kf,
                )
            }
            Family::Horseshoe => {
                let (beta, hyper) = horseshoe_draw_with(&prior, spec.compensate, &mut rng)?;
                let lam_max = hyper.lambda_local.max().to_f64().unwrap_or(f64::NAN);
                (beta, hyper.tau.to_f64().unwrap_or(f64::NAN) * lam_max * kf)
            }
            Family::Rhs => {
                let (beta, hyper) = rhs_draw_with(spec, &prior, &mut rng)?;
                let c_sq = hyper.c_sq.expect("rhs draw");
                let mut zt_max = T::zero();
                for &z in hyper.lambda_local.iter() {
                    zt_max = zt_max.max(rhs_local_scale(z * z, c_sq, hyper.tau)?.sqrt());
                }
                (
                    beta,
                    hyper.tau.to_f64().unwrap_or(f64::NAN)
                        * zt_max.to_f64().unwrap_or(f64::NAN)
                        * kf,
                )
            }
        };
        let residual = beta.sum().abs().to_f64().unwrap_or(f64::INFINITY);
        worst = worst.max(residual / scale.max(f64::MIN_POSITIVE));
    }
    let threshold = match spec.family {
        Family::HierRidge => 1e-10,
        _ => 1e-9,
    };
    Ok((worst, threshold))
}
