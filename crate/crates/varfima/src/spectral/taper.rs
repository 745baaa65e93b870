//! Data tapers and the tapered periodogram.

use crate::error::{Error, Result};
use crate::grid::FourierGrid;
use crate::series::MultivariateSeries;
use crate::spectral::dft::DftTable;
use crate::spectral::{outer_sequence, SpectralSequence};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaperKind {
    /// Flat taper `S(t) = n^{-1/2}`; the tapered periodogram then coincides
    /// with the ordinary one.
    None,
    CosineBell,
}

/// Per-coordinate taper values `S(t)`, `t = 1..n`, normalized so that
/// `sum_t S(t)^2 = 1` for every coordinate.
#[derive(Debug, Clone)]
pub struct TaperSpec {
    kind: TaperKind,
    n: usize,
    values: Vec<Vec<f64>>,
}

impl TaperSpec {
    pub fn kind(&self) -> TaperKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    /// Taper value for coordinate `i` at 0-based time index `t`.
    #[inline]
    pub fn value(&self, i: usize, t: usize) -> f64 {
        self.values[i][t]
    }

    pub fn coordinate(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    fn from_window(kind: TaperKind, n: usize, q: usize, window: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTaper(format!("n = {n} must be at least 2")));
        }
        if q < 1 {
            return Err(Error::InvalidTaper("q must be at least 1".into()));
        }
        let energy: f64 = window.iter().map(|v| v * v).sum();
        if energy <= 0.0 {
            return Err(Error::InvalidTaper("taper has zero energy".into()));
        }
        let scale = 1.0 / energy.sqrt();
        let normalized: Vec<f64> = window.iter().map(|v| v * scale).collect();
        Ok(Self {
            kind,
            n,
            values: vec![normalized; q],
        })
    }
}

/// Cosine-bell (Hann) window `h(u) = (1 - cos(2 pi u)) / 2` on `[0, 1/2]`,
/// mirrored as `h(1 - u)` on `(1/2, 1]`, evaluated at `u = t/n`.
pub fn cosine_bell(u: f64) -> f64 {
    let v = if u <= 0.5 { u } else { 1.0 - u };
    0.5 * (1.0 - (2.0 * PI * v).cos())
}

/// Cosine-bell taper for an `n`-point, `q`-coordinate series.
pub fn cosine_bell_taper(n: usize, q: usize) -> Result<TaperSpec> {
    let window: Vec<f64> = (1..=n).map(|t| cosine_bell(t as f64 / n as f64)).collect();
    TaperSpec::from_window(TaperKind::CosineBell, n, q, &window)
}

/// Flat taper; provided so the trivial-taper consistency between code paths
/// can be exercised directly.
pub fn flat_taper(n: usize, q: usize) -> Result<TaperSpec> {
    TaperSpec::from_window(TaperKind::None, n, q, &vec![1.0; n])
}

/// Tapered periodogram `I_T(lambda_j) = w_T(lambda_j) w_T(lambda_j)*` over
/// the grid, with the taper applied coordinatewise before the transform.
pub fn tapered_periodogram(
    series: &MultivariateSeries,
    grid: &FourierGrid,
    taper: &TaperSpec,
) -> Result<SpectralSequence> {
    if grid.n() != series.n() {
        return Err(Error::DimensionMismatch(format!(
            "grid n = {} but series n = {}",
            grid.n(),
            series.n()
        )));
    }
    if taper.n() != series.n() || taper.q() != series.q() {
        return Err(Error::DimensionMismatch(format!(
            "taper built for n = {}, q = {} but series is n = {}, q = {}",
            taper.n(),
            taper.q(),
            series.n(),
            series.q()
        )));
    }
    let table = DftTable::tapered(series, taper);
    outer_sequence(&table, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::periodogram::periodogram;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn window_values() {
        assert!((cosine_bell(0.25) - 0.5).abs() < 1e-15);
        assert_eq!(cosine_bell(0.5), 1.0);
        assert!((cosine_bell(0.75) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn window_energy_integral() {
        // sum_t h(t/n)^2 / n approximates H = integral of h^2 = 3/8.
        let n = 1000;
        let s: f64 = (1..=n).map(|t| cosine_bell(t as f64 / n as f64).powi(2)).sum();
        assert!((s / n as f64 - 0.375).abs() < 1e-3);
    }

    #[test]
    fn taper_normalization() {
        for &n in &[2usize, 17, 1000] {
            let taper = cosine_bell_taper(n, 3).unwrap();
            for i in 0..3 {
                let energy: f64 = taper.coordinate(i).iter().map(|v| v * v).sum();
                assert!((energy - 1.0).abs() < 1e-10, "n = {n}: energy {energy}");
            }
        }
    }

    #[test]
    fn flat_taper_reproduces_ordinary_periodogram() {
        let mut rng = crate::rng::stream_rng(8);
        let values: Vec<f64> = (0..128).map(|_| StandardNormal.sample(&mut rng)).collect();
        let x = MultivariateSeries::from_flat(64, 2, values).unwrap().demean();
        let grid = FourierGrid::new(64, 20).unwrap();
        let plain = periodogram(&x, &grid).unwrap();
        let tapered = tapered_periodogram(&x, &grid, &flat_taper(64, 2).unwrap()).unwrap();
        for (a, b) in plain.mats().iter().zip(tapered.mats()) {
            for (u, v) in a.iter().zip(b.iter()) {
                assert!((u - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn tapering_breaks_constant_orthogonality() {
        // Without demeaning, a constant series leaks through the taper: the
        // cosine-bell transform of a constant is not zero at lambda_j.
        let x = MultivariateSeries::from_flat(64, 1, vec![1.0; 64]).unwrap();
        let grid = FourierGrid::new(64, 10).unwrap();
        let taper = cosine_bell_taper(64, 1).unwrap();
        let seq = tapered_periodogram(&x, &grid, &taper).unwrap();
        let total: f64 = seq.mats().iter().map(|m| m[(0, 0)].re.abs()).sum();
        assert!(total.is_finite());
        assert!(total > 1e-6, "expected leakage, got {total}");
    }

    #[test]
    fn rejects_mismatched_taper_length() {
        let x = MultivariateSeries::from_flat(64, 1, vec![0.5; 64]).unwrap();
        let grid = FourierGrid::new(64, 10).unwrap();
        let taper = cosine_bell_taper(32, 1).unwrap();
        assert!(tapered_periodogram(&x, &grid, &taper).is_err());
    }
}
