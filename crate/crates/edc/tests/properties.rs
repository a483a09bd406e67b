//! Property tests for the transform, grouping, and model invariants.

use edc::eigenspace::{compute_basis, SolutionPool};
use edc::grouping::Grouping;
use edc::gsmgeda::{estimate_covariance, weighted_mean};
use edc::rng;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut stream = rng::master(seed);
    DMatrix::from_fn(rows, cols, |_, _| stream.sample::<f64, _>(StandardNormal))
}

fn full_pool(n: usize, l: usize, set: usize, seed: u64) -> SolutionPool {
    let mut pool = SolutionPool::new(l, set, n).unwrap();
    for i in 0..l {
        pool.update(&random_matrix(n, set, seed.wrapping_add(i as u64)))
            .unwrap();
    }
    pool
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_orthonormal_roundtrip_isometric(
        n in 2usize..8,
        l in 2usize..5,
        set in 2usize..6,
        seed in 0u64..1000,
    ) {
        let pool = full_pool(n, l, set, seed);
        let basis = compute_basis(&pool, l as u64).unwrap();
        let u = basis.matrix();
        let gram = u.transpose() * u - DMatrix::identity(n, n);
        let err = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(err < 1e-8, "orthonormality error {err}");

        let p = random_matrix(n, 3, seed.wrapping_mul(31).wrapping_add(1));
        let back = basis.backward(&basis.forward(&p).unwrap()).unwrap();
        let max_abs = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in back.iter().zip(p.iter()) {
            prop_assert!((a - b).abs() < 1e-8 * (1.0 + max_abs));
        }
        let fwd = basis.forward(&p).unwrap();
        for c in 0..p.ncols() {
            let n0 = p.column(c).norm();
            prop_assert!((fwd.column(c).norm() - n0).abs() < 1e-8 * (1.0 + n0));
        }
    }

    #[test]
    fn grouping_partitions_and_inverts(
        n in 1usize..40,
        s_frac in 0.01f64..1.0,
        cols in 1usize..4,
        seed in 0u64..1000,
    ) {
        let s = ((n as f64 * s_frac).ceil() as usize).clamp(1, n);
        let mut r = rng::master(seed);
        let g = Grouping::random(n, s, &mut r).unwrap();
        prop_assert_eq!(g.num_groups(), n.div_ceil(s));
        let total: usize = g.group_sizes().iter().sum();
        prop_assert_eq!(total, n);

        let mut seen = vec![false; n];
        for i in 0..g.num_groups() {
            for &idx in g.group_indices(i) {
                prop_assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        prop_assert!(seen.iter().all(|&x| x));

        let b = random_matrix(n, cols, seed.wrapping_add(7));
        let merged = g.merge(&g.split(&b).unwrap()).unwrap();
        prop_assert_eq!(merged, b); // bit-exact
    }

    #[test]
    fn weighted_mean_stays_in_hull(
        rows in 1usize..6,
        cols in 1usize..10,
        seed in 0u64..1000,
    ) {
        let h = random_matrix(rows, cols, seed);
        let m = weighted_mean(&h).unwrap();
        for r in 0..rows {
            let row = h.row(r);
            let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(m[r] >= lo - 1e-12 && m[r] <= hi + 1e-12);
        }
    }

    #[test]
    fn covariance_is_symmetric_psd(
        d in 1usize..6,
        k in 1usize..10,
        seed in 0u64..1000,
    ) {
        let h = random_matrix(d, k, seed);
        let mu = DVector::from_column_slice(
            random_matrix(d, 1, seed.wrapping_add(3)).as_slice(),
        );
        let c = estimate_covariance(&h, &mu).unwrap();
        prop_assert_eq!(&c, &c.transpose());
        let trace = c.trace();
        let eig = nalgebra::SymmetricEigen::new(c);
        for ev in eig.eigenvalues.iter() {
            prop_assert!(*ev >= -1e-10 * trace.max(1.0));
        }
    }
}
