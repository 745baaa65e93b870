//! Shared fixtures for the pipeline benchmarks.

use varfima::{equicorrelation, FilterKind, MemoryParams, MultivariateSeries, Varfima0Process};

/// Benchmark-scale generator: n = 1000, truncation 50,000, rho = 0.3.
pub fn benchmark_process(d: &[f64], filter: FilterKind) -> Varfima0Process {
    let d = MemoryParams::new(d.to_vec()).expect("valid d");
    let corr = equicorrelation(d.q(), 0.3);
    Varfima0Process::with_filter(&d, &corr, 1000, 50_000, filter).expect("valid process")
}

/// One fixed draw shared across estimation benchmarks.
pub fn benchmark_series() -> MultivariateSeries {
    benchmark_process(&[0.1, 0.4], FilterKind::ZeroPhase).sample(42)
}
