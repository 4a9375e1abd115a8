//! Property tests for the constrained-prior invariants on randomly generated
//! systems: residuals, semi-definiteness, rank, basis contracts, and the
//! deterministic covariance identity.

use congauss::basis::{sum_zero_basis, svd_null_basis};
use congauss::constraint::{conditional_moments, rank_of, ConstraintSystem, DiagonalScales};
use congauss::rng::RngStream;
use congauss::sampler::ConstrainedGaussian;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct SystemCase {
    a: DMatrix<f64>,
    b: DVector<f64>,
    d: DVector<f64>,
}

fn system_strategy(zero_b: bool) -> impl Strategy<Value = SystemCase> {
    (2usize..=8)
        .prop_flat_map(move |k| {
            (1usize..k).prop_flat_map(move |j| {
                let a = proptest::collection::vec(-3.0..3.0f64, j * k);
                let b = if zero_b {
                    proptest::collection::vec(Just(0.0f64), j).boxed()
                } else {
                    proptest::collection::vec(-2.0..2.0f64, j).boxed()
                };
                let d = proptest::collection::vec(0.1..5.0f64, k);
                (Just((j, k)), a, b, d)
            })
        })
        .prop_map(|((j, k), a, b, d)| SystemCase {
            a: DMatrix::from_row_slice(j, k, &a),
            b: DVector::from_vec(b),
            d: DVector::from_vec(d),
        })
}

fn build_system(case: &SystemCase) -> Option<(ConstraintSystem<f64>, DiagonalScales<f64>)> {
    // random matrices are full row rank almost surely; skip the exceptions
    let c = ConstraintSystem::new(case.a.clone(), case.b.clone()).ok()?;
    let d = DiagonalScales::new(case.d.clone()).ok()?;
    Some((c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mean_satisfies_constraint(case in system_strategy(false)) {
        let Some((c, d)) = build_system(&case) else { return Ok(()); };
        let (mean, _) = conditional_moments(&c, &d).unwrap();
        let b_norm = case.b.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        prop_assert!(c.residual_inf(&mean) <= 1e-10 * (b_norm + 1.0));
    }

    #[test]
    fn zero_b_gives_exactly_zero_mean(case in system_strategy(true)) {
        let Some((c, d)) = build_system(&case) else { return Ok(()); };
        let (mean, _) = conditional_moments(&c, &d).unwrap();
        prop_assert!(mean.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn covariance_is_psd_with_rank_k_minus_j(case in system_strategy(false)) {
        let Some((c, d)) = build_system(&case) else { return Ok(()); };
        let (_, cov) = conditional_moments(&c, &d).unwrap();

        // independent PSD oracle: symmetric eigendecomposition
        let eig = cov.clone().symmetric_eigen().eigenvalues;
        let max = eig.iter().fold(0.0f64, |m, &x| m.max(x));
        let min = eig.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        prop_assert!(min >= -1e-10 * max, "min eigenvalue {min}, max {max}");

        prop_assert_eq!(rank_of(&cov), c.k() - c.j());
    }

    #[test]
    fn covariance_annihilates_constraint_rows(case in system_strategy(false)) {
        let Some((c, d)) = build_system(&case) else { return Ok(()); };
        let (_, cov) = conditional_moments(&c, &d).unwrap();
        let prod = cov * c.a().transpose();
        let worst = prod.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let scale = (1.0 + case.d.max()) * (1.0 + case.a.iter().fold(0.0f64, |m, &x| m.max(x.abs())));
        prop_assert!(worst <= 1e-10 * scale * c.k() as f64, "|cov A'| = {worst}");
    }

    #[test]
    fn svd_basis_contracts_hold(case in system_strategy(false)) {
        let Some((c, _)) = build_system(&case) else { return Ok(()); };
        let basis = svd_null_basis(&c).unwrap();
        let m = basis.matrix();
        let annihilation = (c.a() * m).iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        prop_assert!(annihilation <= 1e-12 * c.k() as f64);
        let gram = m.transpose() * m;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - target).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn covariance_identity_for_both_bases(k in 2usize..=12) {
        let c = ConstraintSystem::<f64>::sum_to_zero(k).unwrap();
        let d = DiagonalScales::unit(k);
        for basis in [sum_zero_basis::<f64>(k).unwrap(), svd_null_basis(&c).unwrap()] {
            let g = ConstrainedGaussian::build_with_basis(c.clone(), &d, basis).unwrap();
            let m = g.basis().matrix();
            let l = g.reduced_chol();
            let recovered = m * (l * l.transpose()) * m.transpose();
            let err = (&recovered - g.cov()).norm() / g.cov().norm();
            prop_assert!(err <= 1e-10, "relative error {err}");
        }
    }

    #[test]
    fn draws_always_satisfy_constraint(case in system_strategy(false), seed in any::<u64>()) {
        let Some((c, d)) = build_system(&case) else { return Ok(()); };
        let b_norm = case.b.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let g = ConstrainedGaussian::build(c, &d).unwrap();
        let stream = RngStream::new(seed, 0);
        let batch = g.draw_batch(&stream, 32);
        for i in 0..batch.nrows() {
            let beta = batch.row(i).transpose();
            prop_assert!(g.constraint().residual_inf(&beta) <= 1e-9 * (b_norm + 1.0));
        }
    }

    #[test]
    fn batches_are_order_independent(seed in any::<u64>(), stream_id in any::<u64>()) {
        let g = ConstrainedGaussian::build(
            ConstraintSystem::<f64>::sum_to_zero(4).unwrap(),
            &DiagonalScales::unit(4),
        )
        .unwrap();
        let stream = RngStream::new(seed, stream_id);
        let batch = g.draw_batch(&stream, 16);
        // row i is a pure function of (seed, stream_id, i)
        for i in (0..16).rev() {
            prop_assert_eq!(batch.row(i).transpose(), g.draw_at(&stream, i as u64));
        }
    }
}
