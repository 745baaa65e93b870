//! Property tests for the crate-wide invariants.

use proptest::prelude::*;
use varfima::{
    bandwidth_from_exponent, FilterKind, fracdiff_coeffs, io, objective, periodogram, tapered_periodogram,
    FourierGrid, MemoryParams, Method, MultivariateSeries, ObjectiveContext, SpectralEstimator,
};

fn series_strategy(n: usize, q: usize) -> impl Strategy<Value = MultivariateSeries> {
    proptest::collection::vec(-100.0f64..100.0, n * q)
        .prop_map(move |values| MultivariateSeries::from_flat(n, q, values).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn demean_is_idempotent_bit_exact(x in series_strategy(40, 2)) {
        let once = x.demean();
        let twice = once.demean();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn demeaned_columns_have_tiny_means(x in series_strategy(64, 3)) {
        for mean in x.demean().column_means() {
            prop_assert!(mean.abs() < 1e-12);
        }
    }

    #[test]
    fn fracdiff_inverse_pair_convolves_to_identity(d in -0.49f64..0.49) {
        // (1-B)^{-d} (1-B)^{d} = 1, so the coefficient sequences convolve to
        // the unit impulse; the first K product coefficients only involve the
        // first K terms of each factor, so truncation is exact here.
        let count = 64;
        let plus = fracdiff_coeffs(d, count).unwrap();
        let minus = fracdiff_coeffs(-d, count).unwrap();
        for k in 0..count {
            let conv: f64 = (0..=k).map(|i| plus[i] * minus[k - i]).sum();
            let expected = if k == 0 { 1.0 } else { 0.0 };
            prop_assert!((conv - expected).abs() < 1e-12, "k = {}: {}", k, conv);
        }
    }

    #[test]
    fn series_csv_round_trips_bit_exact(x in series_strategy(16, 2)) {
        let text = io::series_to_csv(&x);
        let back = io::read_series_csv_from(text.as_bytes()).unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn grid_frequencies_match_their_construction(n in 8usize..2000, frac in 0.1f64..0.99) {
        let cap = (n + 1) / 2 - 1;
        prop_assume!(cap >= 1);
        let m = ((cap as f64 * frac) as usize).max(1);
        let grid = FourierGrid::new(n, m).unwrap();
        for j in 1..=m {
            prop_assert_eq!(grid.freq(j), 2.0 * std::f64::consts::PI * j as f64 / n as f64);
        }
        prop_assert!(grid.freq(m) < std::f64::consts::PI);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn estimators_scale_quadratically_and_stay_hermitian(seed in 0u64..1000, pow in -2i32..3) {
        let mut rng = varfima::rng::stream_rng(seed);
        use rand::Rng;
        let values: Vec<f64> = (0..128).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x = MultivariateSeries::from_flat(64, 2, values).unwrap().demean();
        let grid = FourierGrid::new(64, 20).unwrap();
        let c = 2f64.powi(pow);
        let scaled = x.scaled(c);
        for est in [
            SpectralEstimator::Periodogram,
            SpectralEstimator::TaperedCosineBell,
            SpectralEstimator::SmoothedBartlett { ell: 5, exclude_minus_j: false },
            SpectralEstimator::SmoothedBartlett { ell: 5, exclude_minus_j: true },
        ] {
            let a = varfima::spectral::estimate_spectrum(&x, &grid, &est).unwrap();
            let b = varfima::spectral::estimate_spectrum(&scaled, &grid, &est).unwrap();
            prop_assert!(a.max_hermitian_deviation() <= 1e-12);
            for (ma, mb) in a.mats().iter().zip(b.mats()) {
                for (u, v) in ma.iter().zip(mb.iter()) {
                    // Scaling by a power of two is exact through the FFT.
                    prop_assert_eq!(c * c * u, *v);
                }
            }
        }
    }

    #[test]
    fn objective_shift_under_scaling(seed in 0u64..1000, d1 in -0.45f64..0.45, d2 in -0.45f64..0.45) {
        let mut rng = varfima::rng::stream_rng(seed);
        use rand::Rng;
        let values: Vec<f64> = (0..256).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = MultivariateSeries::from_flat(128, 2, values).unwrap().demean();
        let grid = FourierGrid::new(128, 40).unwrap();
        let c = 10.0;
        let base = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
        let scaled = ObjectiveContext::new(periodogram(&x.scaled(c), &grid).unwrap());
        let d = MemoryParams::new(vec![d1, d2]).unwrap();
        let shift = 2.0 * 2.0 * c.ln();
        prop_assert!((objective(&d, &scaled) - objective(&d, &base) - shift).abs() < 1e-8);
    }
}

#[test]
fn tapered_estimator_tracks_memory_like_plain() {
    // TSh and Sh agree in expectation; check they land near each other on a
    // long-memory draw, as the paper's tables show.
    let spec = varfima::Varfima0Spec {
        d: MemoryParams::new(vec![0.3, 0.1]).unwrap(),
        innovation_corr: varfima::equicorrelation(2, 0.3),
        n: 1000,
        truncation: 5000,
        seed: 77,
    };
    let x = varfima::simulate(&spec).unwrap();
    let m = bandwidth_from_exponent(1000, 0.85).unwrap();
    let bounds = varfima::ThetaBounds::default();
    let sh = varfima::estimate_with_method(&x, Method::Sh, m, None, &bounds).unwrap();
    let tsh = varfima::estimate_with_method(&x, Method::TSh, m, None, &bounds).unwrap();
    for k in 0..2 {
        assert!(
            (sh.d_hat.get(k) - tsh.d_hat.get(k)).abs() < 0.1,
            "coordinate {k}: sh {} vs tsh {}",
            sh.d_hat.get(k),
            tsh.d_hat.get(k)
        );
    }
}

#[test]
fn raw_estimate_correlation_matches_limit_for_independent_noise() {
    // At rho = 0 the limiting covariance is diagonal, so the two estimate
    // coordinates should be nearly uncorrelated across replications.
    let grid = varfima::ExperimentGrid {
        n: 1000,
        replications: 100,
        d_list: vec![vec![0.1, 0.4]],
        rho_list: vec![0.0],
        methods: vec![Method::Sh],
        alpha_list: vec![0.85],
        beta_list: vec![],
        truncation: 10_000,
        filter: FilterKind::ZeroPhase,
        master_seed: 404,
    };
    let cell = varfima::run_cell(&grid, &grid.cells()[0]).unwrap();
    let (a, b): (Vec<f64>, Vec<f64>) = cell.raw.iter().map(|r| (r[0], r[1])).unzip();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (ma, mb) = (mean(&a), mean(&b));
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    let corr = cov / (va.sqrt() * vb.sqrt());
    assert!(corr.abs() < 0.2, "sample correlation {corr}");
}

#[test]
fn tapered_matches_brute_force_on_small_series() {
    let mut rng = varfima::rng::stream_rng(31);
    use rand::Rng;
    let values: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
    let x = MultivariateSeries::from_flat(32, 2, values).unwrap().demean();
    let grid = FourierGrid::new(32, 10).unwrap();
    let taper = varfima::cosine_bell_taper(32, 2).unwrap();
    let seq = tapered_periodogram(&x, &grid, &taper).unwrap();
    // Direct summation of the tapered transform.
    for j in 1..=grid.m() {
        let lambda = grid.freq(j);
        let mut w = [num_complex::Complex64::ZERO; 2];
        for t in 1..=32usize {
            let phase = num_complex::Complex64::from_polar(1.0, t as f64 * lambda);
            for (i, slot) in w.iter_mut().enumerate() {
                *slot += taper.value(i, t - 1) * x.value(t - 1, i) * phase;
            }
        }
        let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        for slot in w.iter_mut() {
            *slot *= norm;
        }
        let mat = &seq.mats()[j - 1];
        for r in 0..2 {
            for s in 0..2 {
                assert!((mat[(r, s)] - w[r] * w[s].conj()).norm() < 1e-12);
            }
        }
    }
}
