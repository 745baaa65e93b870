//! Discrete Fourier transforms of a series at the Fourier frequencies.

use crate::series::MultivariateSeries;
use crate::spectral::taper::TaperSpec;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Cached transform ordinates `w(lambda_j)` for all `j = 0..n-1`, stored
/// frequency-major (`q` coordinates per frequency).
///
/// Plain tables hold `w_n(lambda) = (2 pi n)^{-1/2} sum_t X_t e^{i t lambda}`;
/// tapered tables hold `(2 pi)^{-1/2} sum_t S(t) X_t e^{i t lambda}` where the
/// taper normalization `sum_t S(t)^2 = 1` absorbs the `1/n`.
pub struct DftTable {
    n: usize,
    q: usize,
    w: Vec<Complex64>,
}

impl DftTable {
    /// Ordinary transform table.
    pub fn new(series: &MultivariateSeries) -> Self {
        let norm = 1.0 / (2.0 * PI * series.n() as f64).sqrt();
        Self::build(series, None, norm)
    }

    /// Tapered transform table. The taper must match the series dimensions.
    pub fn tapered(series: &MultivariateSeries, taper: &TaperSpec) -> Self {
        let norm = 1.0 / (2.0 * PI).sqrt();
        Self::build(series, Some(taper), norm)
    }

    fn build(series: &MultivariateSeries, taper: Option<&TaperSpec>, norm: f64) -> Self {
        let n = series.n();
        let q = series.q();
        let mut planner = FftPlanner::new();
        // The unnormalized inverse transform is sum_t x[t] e^{+2 pi i j t / n};
        // the extra e^{i lambda_j} phase accounts for time starting at t = 1.
        let inv = planner.plan_fft_inverse(n);
        let mut w = vec![Complex64::ZERO; n * q];
        let mut buf = vec![Complex64::ZERO; n];
        for i in 0..q {
            for t in 0..n {
                let v = match taper {
                    Some(tp) => tp.value(i, t) * series.value(t, i),
                    None => series.value(t, i),
                };
                buf[t] = Complex64::new(v, 0.0);
            }
            inv.process(&mut buf);
            for j in 0..n {
                let lambda = 2.0 * PI * j as f64 / n as f64;
                let phase = Complex64::from_polar(1.0, lambda);
                w[j * q + i] = norm * phase * buf[j];
            }
        }
        Self { n, q, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Ordinates at frequency index `j` (0-based over `0..n-1`).
    #[inline]
    pub fn at(&self, j: usize) -> &[Complex64] {
        &self.w[j * self.q..(j + 1) * self.q]
    }

    /// Frequency index for `j + k` with periodic wrapping; combined with the
    /// conjugate symmetry of real-series transforms this realizes both
    /// `I(lambda + 2 pi) = I(lambda)` and `I(-lambda) = conj(I(lambda))`.
    #[inline]
    pub fn wrap(&self, j: isize) -> usize {
        j.rem_euclid(self.n as isize) as usize
    }
}

/// The transform at an arbitrary frequency, by direct summation:
/// `(2 pi n)^{-1/2} sum_{t=1}^n X_t e^{i t lambda}`.
pub fn dft_at(series: &MultivariateSeries, lambda: f64) -> Vec<Complex64> {
    let n = series.n();
    let q = series.q();
    let norm = 1.0 / (2.0 * PI * n as f64).sqrt();
    let mut acc = vec![Complex64::ZERO; q];
    for t in 1..=n {
        let phase = Complex64::from_polar(1.0, t as f64 * lambda);
        for (i, slot) in acc.iter_mut().enumerate() {
            *slot += series.value(t - 1, i) * phase;
        }
    }
    acc.iter().map(|v| v * norm).collect()
}
