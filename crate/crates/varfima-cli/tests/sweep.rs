//! Fuzz-style sweep of the simulate -> estimate pipeline the CLI wraps:
//! one replication per point of a 0.05 grid over the admissible box, at
//! every supported innovation correlation. Nothing may crash and every
//! estimate must land inside the box.

use rayon::prelude::*;
use varfima::{
    bandwidth_from_exponent, equicorrelation, estimate_with_method, MemoryParams, Method,
    ThetaBounds, Varfima0Process,
};

#[test]
fn simulate_estimate_round_trip_never_fails() {
    let bounds = ThetaBounds::default();
    let mut axis: Vec<f64> = Vec::new();
    let mut i = 0;
    loop {
        let v = bounds.lower() + 0.05 * i as f64;
        if v >= bounds.upper() {
            break;
        }
        axis.push(v);
        i += 1;
    }
    axis.push(bounds.upper());

    let n = 128usize;
    let truncation = 300usize;
    let m = bandwidth_from_exponent(n, 0.85).unwrap();
    let mut points: Vec<(f64, f64, f64)> = Vec::new();
    for &rho in &[0.0, 0.3, 0.6, 0.8] {
        for &d1 in &axis {
            for &d2 in &axis {
                points.push((d1, d2, rho));
            }
        }
    }
    assert_eq!(points.len(), axis.len() * axis.len() * 4);

    points.par_iter().for_each(|&(d1, d2, rho)| {
        let d = MemoryParams::new(vec![d1, d2]).unwrap();
        let process = Varfima0Process::new(&d, &equicorrelation(2, rho), n, truncation)
            .unwrap_or_else(|e| panic!("process ({d1},{d2},{rho}): {e}"));
        let seed = varfima::rng::stream_seed(
            1_234,
            &[d1.to_bits(), d2.to_bits(), rho.to_bits()],
        );
        let x = process.sample(seed);
        let fit = estimate_with_method(&x, Method::Sh, m, None, &bounds)
            .unwrap_or_else(|e| panic!("estimate ({d1},{d2},{rho}): {e}"));
        for &v in fit.d_hat.values() {
            assert!(
                (bounds.lower()..=bounds.upper()).contains(&v),
                "estimate {v} escaped the box at ({d1},{d2},{rho})"
            );
        }
        assert!(fit.objective_value.is_finite());
    });
}
