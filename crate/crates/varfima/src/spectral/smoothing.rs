//! Smoothing windows and the smoothed periodogram.

use crate::error::{Error, Result};
use crate::grid::FourierGrid;
use crate::series::MultivariateSeries;
use crate::spectral::dft::DftTable;
use crate::spectral::{hermitian_from_upper, SpectralSequence};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Symmetric nonnegative weights `W(k)`, `k = -ell..ell`, summing to one.
///
/// When `exclude_minus_j` is set, the smoothed periodogram omits the `k = -j`
/// term (the one that touches the zero frequency) and renormalizes the
/// remaining weights for that `j`.
#[derive(Debug, Clone)]
pub struct SmoothingWeights {
    ell: usize,
    weights: Vec<f64>, // index k + ell
    exclude_minus_j: bool,
}

impl SmoothingWeights {
    /// Build from the center-and-right half `[W(0), W(1), .., W(ell)]`.
    /// The half is mirrored (so symmetry holds exactly) and normalized to
    /// sum to one.
    pub fn from_half(half: &[f64]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidWindow("empty weight sequence".into()));
        }
        let ell = half.len() - 1;
        for (k, &w) in half.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWindow(format!(
                    "weight W({k}) = {w} must be finite and nonnegative"
                )));
            }
        }
        let total: f64 = half[0] + 2.0 * half[1..].iter().sum::<f64>();
        if total <= 0.0 {
            return Err(Error::InvalidWindow("weights sum to zero".into()));
        }
        let mut weights = vec![0.0; 2 * ell + 1];
        for (k, &w) in half.iter().enumerate() {
            let v = w / total;
            weights[ell + k] = v;
            weights[ell - k] = v;
        }
        Ok(Self {
            ell,
            weights,
            exclude_minus_j: false,
        })
    }

    /// The identity window: all mass at `k = 0`.
    pub fn point_mass() -> Self {
        Self {
            ell: 0,
            weights: vec![1.0],
            exclude_minus_j: false,
        }
    }

    pub fn with_exclude_minus_j(mut self, exclude: bool) -> Self {
        self.exclude_minus_j = exclude;
        self
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn exclude_minus_j(&self) -> bool {
        self.exclude_minus_j
    }

    /// Weight at offset `k` (`|k| <= ell`).
    #[inline]
    pub fn weight(&self, k: isize) -> f64 {
        self.weights[(k + self.ell as isize) as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Bartlett (Fejer) spectral window sampled at the Fourier frequencies:
/// `W(k) oc sin^2(ell lambda_k / 2) / (n ell sin^2(lambda_k / 2))` with the
/// `k = 0` value set by the continuous limit `ell / n`, then normalized so
/// the `2 ell + 1` weights sum to one.
pub fn bartlett_weights(n: usize, ell: usize) -> Result<SmoothingWeights> {
    if ell < 1 {
        return Err(Error::InvalidWindow("ell must be at least 1".into()));
    }
    if 2 * ell >= n {
        return Err(Error::InvalidWindow(format!(
            "ell = {ell} must be below n/2 = {}",
            n as f64 / 2.0
        )));
    }
    let nf = n as f64;
    let ellf = ell as f64;
    let mut half = Vec::with_capacity(ell + 1);
    half.push(ellf / nf);
    for k in 1..=ell {
        let lambda_k = 2.0 * PI * k as f64 / nf;
        let num = (ellf * lambda_k / 2.0).sin().powi(2);
        let den = nf * ellf * (lambda_k / 2.0).sin().powi(2);
        half.push(num / den);
    }
    SmoothingWeights::from_half(&half)
}

/// Smoothed periodogram
/// `f_hat(lambda_j) = sum_{|k| <= ell} W(k) w(lambda_{j+k}) w(lambda_{j+k})*`.
///
/// Out-of-range indices wrap periodically, which together with the conjugate
/// symmetry of real-series transforms realizes the extension
/// `I(-lambda) = conj(I(lambda))`. With `exclude_minus_j` the `k = -j` term is
/// dropped and the remaining weights renormalized for that `j`.
pub fn smoothed_periodogram(
    series: &MultivariateSeries,
    grid: &FourierGrid,
    weights: &SmoothingWeights,
) -> Result<SpectralSequence> {
    check_dimensions(series, grid, weights.ell())?;
    let table = DftTable::new(series);
    let shared = |_r: usize, _s: usize| weights;
    smoothed_from_table(&table, grid, weights.ell(), weights.exclude_minus_j(), shared)
}

/// Smoothed periodogram with one weight sequence per spectral-density entry
/// (the Hadamard-product form). All sequences must share the half-width and
/// exclusion flag, and the weight pattern must be symmetric in `(r, s)` so
/// the output stays Hermitian. Positive semidefiniteness is only guaranteed
/// when the per-`k` weight pattern is itself positive semidefinite.
pub fn smoothed_periodogram_per_entry(
    series: &MultivariateSeries,
    grid: &FourierGrid,
    entry_weights: &[Vec<SmoothingWeights>],
) -> Result<SpectralSequence> {
    let q = series.q();
    if entry_weights.len() != q || entry_weights.iter().any(|row| row.len() != q) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {q} x {q} weight pattern"
        )));
    }
    let ell = entry_weights[0][0].ell();
    let exclude = entry_weights[0][0].exclude_minus_j();
    for r in 0..q {
        for s in 0..q {
            let w = &entry_weights[r][s];
            if w.ell() != ell || w.exclude_minus_j() != exclude {
                return Err(Error::InvalidWindow(
                    "per-entry weights must share half-width and exclusion flag".into(),
                ));
            }
            if w.weights() != entry_weights[s][r].weights() {
                return Err(Error::InvalidWindow(
                    "per-entry weight pattern must be symmetric in (r, s)".into(),
                ));
            }
        }
    }
    check_dimensions(series, grid, ell)?;
    let table = DftTable::new(series);
    let lookup = |r: usize, s: usize| &entry_weights[r][s];
    smoothed_from_table(&table, grid, ell, exclude, lookup)
}

fn check_dimensions(series: &MultivariateSeries, grid: &FourierGrid, ell: usize) -> Result<()> {
    if grid.n() != series.n() {
        return Err(Error::DimensionMismatch(format!(
            "grid n = {} but series n = {}",
            grid.n(),
            series.n()
        )));
    }
    if ell > 0 && 2 * ell >= series.n() {
        return Err(Error::DimensionMismatch(format!(
            "window half-width ell = {ell} too large for n = {}",
            series.n()
        )));
    }
    Ok(())
}

fn smoothed_from_table<'a, F>(
    table: &DftTable,
    grid: &FourierGrid,
    ell: usize,
    exclude_minus_j: bool,
    weight_for: F,
) -> Result<SpectralSequence>
where
    F: Fn(usize, usize) -> &'a SmoothingWeights,
{
    let q = table.q();
    let ell_i = ell as isize;
    let mut mats = Vec::with_capacity(grid.m());
    for j in 1..=grid.m() {
        let j_i = j as isize;
        let skip_k = if exclude_minus_j && j_i >= -ell_i && -j_i <= ell_i {
            Some(-j_i)
        } else {
            None
        };
        let mut mat = DMatrix::<Complex64>::zeros(q, q);
        for r in 0..q {
            for s in r..q {
                let w = weight_for(r, s);
                let mut acc = Complex64::ZERO;
                let mut kept = 0.0;
                for k in -ell_i..=ell_i {
                    if Some(k) == skip_k {
                        continue;
                    }
                    let wk = w.weight(k);
                    kept += wk;
                    let idx = table.wrap(j_i + k);
                    let ords = table.at(idx);
                    acc += wk * (ords[r] * ords[s].conj());
                }
                if skip_k.is_some() && kept > 0.0 {
                    acc /= kept;
                }
                mat[(r, s)] = acc;
            }
        }
        hermitian_from_upper(&mut mat);
        mats.push(mat);
    }
    SpectralSequence::new(grid.clone(), mats)
}
