//! Property tests for the invariants every ensemble and fit must satisfy.

use hurstlab_core::scaling::fit_hurst_variance;
use hurstlab_core::structure::*;
use hurstlab_core::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn covariance_is_symmetric(s in 0.0f64..50.0, t in 0.0f64..50.0, h in 0.01f64..0.99, c in 0.01f64..10.0) {
        let a = fbm_covariance(s, t, h, c).unwrap();
        let b = fbm_covariance(t, s, h, c).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn noiseless_power_law_fits_exactly(h in 0.01f64..0.99, c in 0.01f64..10.0, n in 3usize..12) {
        let curve: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let t = 2f64.powi(k as i32) * 0.5;
                (t, c * t.powf(2.0 * h))
            })
            .collect();
        let f = fit_hurst_variance(&curve).unwrap();
        prop_assert!((f.h_hat - h).abs() < 1e-10);
        prop_assert!((f.c_hat - c).abs() < 1e-9 * c.max(1.0));
        prop_assert!(f.per_point_log_residuals.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn drift_round_trip_is_bit_exact(
        values in prop::collection::vec(-1e6f64..1e6, 6),
        tiny in prop::collection::vec(-1e-18f64..1e-18, 6),
        rate in -5.0f64..5.0,
        knots in prop::collection::vec(-3.0f64..3.0, 4),
    ) {
        let grid = std::sync::Arc::new(make_grid(GridKind::Uniform, 0.5, 3.0, 6).unwrap());
        let v: Vec<f64> = values.iter().zip(&tiny).enumerate().map(|(i, (a, b))| if i % 2 == 0 { *a } else { *b }).collect();
        let path = SamplePath::new(grid, v).unwrap();
        let table = DriftSpec::tabulated(vec![0.0, 1.0, 2.0, 4.0], knots).unwrap();
        for d in [DriftSpec::Constant(rate), table] {
            let back = remove_drift(&apply_drift(&path, &d).unwrap(), &d).unwrap();
            prop_assert_eq!(back.values(), path.values());
        }
    }

    #[test]
    fn grid_rejects_non_monotone(mut times in prop::collection::vec(0.0f64..100.0, 2..20), i in 0usize..19) {
        let i = i % (times.len() - 1);
        times.sort_by(f64::total_cmp);
        times[i + 1] = times[i];
        prop_assert!(TimeGrid::new(times.clone()).is_err());
        times.swap(i, i + 1);
        prop_assert!(TimeGrid::new(times).is_err());
    }

    #[test]
    fn gaussian_kernel_satisfies_chapman_kolmogorov(
        h in 0.05f64..0.95,
        c in 0.1f64..5.0,
        t0 in 0.0f64..2.0,
        d1 in 0.1f64..3.0,
        d2 in 0.1f64..3.0,
    ) {
        let k = TransitionKernel::new(h, c).unwrap();
        let (tm, t) = (t0 + d1, t0 + d1 + d2);
        let grid = ck_grid(&k, t0, t, 2048);
        prop_assert!(ck_residual(&k, t0, tm, t, &grid).unwrap() < 1e-6);
    }
}

// Monte Carlo properties are expensive; a handful of cases each.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn markov_increments_uncorrelated_on_any_disjoint_pair(a in 0usize..8, b in 1usize..4, c in 0usize..4, d in 1usize..4) {
        // intervals [a, a + b] and [a + b + c, a + b + c + d] on an integer grid
        let g = make_grid(GridKind::Uniform, 0.0, 20.0, 21).unwrap();
        let n = 10_000;
        let e = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.7, 1.0).unwrap(), &g, n, 4242).unwrap();
        let t1 = (a + b) as f64;
        let t2 = (a + b + c) as f64;
        let est = structure::increment_autocorrelation(&e, t1, b as f64, t2, d as f64).unwrap();
        // 3/√N, widened to 4 for the multiplicity of sampled pairs
        prop_assert!(est.value.abs() < 4.0 / (n as f64).sqrt(), "{:?}", est);
    }

    #[test]
    fn overlapping_pairs_never_yield_a_number(t1 in 4usize..10, lag1 in 1usize..4, offset in 0usize..4, lag2 in 1usize..4) {
        let g = make_grid(GridKind::Uniform, 0.0, 20.0, 21).unwrap();
        let e = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.7, 1.0).unwrap(), &g, 10, 1).unwrap();
        // second interval starts inside [t1 - lag1, t1)
        let t2 = t1 - lag1 + offset % lag1;
        let r = structure::increment_autocorrelation(&e, t1 as f64, lag1 as f64, t2 as f64, lag2 as f64);
        prop_assert!(matches!(r, Err(Error::OverlappingIntervals(_))), "{:?}", r);
        // second interval ends inside (t1 - lag1, t1]
        let t2 = (t1 - lag1 + 1 + offset % lag1) as f64 - lag2 as f64;
        let r = structure::increment_autocorrelation(&e, t1 as f64, lag1 as f64, t2, lag2 as f64);
        prop_assert!(matches!(r, Err(Error::OverlappingIntervals(_))), "{:?}", r);
    }

    #[test]
    fn markov_martingale_residual_is_null(t in 1usize..10, lag in 1usize..6) {
        let g = make_grid(GridKind::Uniform, 0.0, 16.0, 17).unwrap();
        let e = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.3, 1.0).unwrap(), &g, 10_000, 77).unwrap();
        let m = structure::martingale_residual(&e, t as f64, lag as f64).unwrap();
        prop_assert!(m.residual.within(0.0, 3.5), "{:?}", m.residual);
    }
}

#[test]
fn generation_ignores_worker_count() {
    let g = make_grid(GridKind::Geometric, 1.0, 64.0, 7).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let a = gen_fbm(&ProcessSpec::fbm(0.7, 1.0).unwrap(), &g, 3000, 9).unwrap();
            let b = gen_scaling_markov_exact(&ProcessSpec::markov_exact(0.7, 1.0).unwrap(), &g, 3000, 9).unwrap();
            let c = gen_scaling_markov_sde(&ProcessSpec::markov_sde(0.7, 1.0).unwrap(), &g, 4, 3000, 9).unwrap();
            let bits = |e: &Ensemble| -> Vec<u64> {
                e.paths().iter().flat_map(|p| p.values().iter().map(|v| v.to_bits())).collect()
            };
            (bits(&a), bits(&b), bits(&c.ensemble), c.ito_variance.iter().map(|v| v.to_bits()).collect::<Vec<_>>())
        })
    };
    assert_eq!(run(1), run(4));
    assert_eq!(run(1), run(7));
}

#[test]
fn regeneration_is_reproducible() {
    let g = make_grid(GridKind::Uniform, 0.0, 4.0, 5).unwrap();
    let spec = ProcessSpec::fbm(0.3, 2.0).unwrap();
    let a = gen_fbm(&spec, &g, 100, 5).unwrap();
    let b = gen_fbm(&spec, &g, 100, 5).unwrap();
    let c = gen_fbm(&spec, &g, 100, 6).unwrap();
    assert_eq!(a.paths(), b.paths());
    assert_ne!(a.paths(), c.paths());
}
