//! Spectral-density estimators: ordinary, tapered and smoothed periodograms.

pub mod dft;
pub mod periodogram;
pub mod smoothing;
pub mod taper;

use crate::error::{Error, Result};
use crate::grid::FourierGrid;
use crate::series::MultivariateSeries;
use dft::DftTable;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub use dft::dft_at;
pub use periodogram::periodogram;
pub use smoothing::{
    bartlett_weights, smoothed_periodogram, smoothed_periodogram_per_entry, SmoothingWeights,
};
pub use taper::{cosine_bell, cosine_bell_taper, flat_taper, tapered_periodogram, TaperKind, TaperSpec};

/// A spectral-density estimate over a Fourier grid: one Hermitian `q x q`
/// matrix per frequency `lambda_1 .. lambda_m`.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    grid: FourierGrid,
    mats: Vec<DMatrix<Complex64>>,
}

impl SpectralSequence {
    pub fn new(grid: FourierGrid, mats: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if mats.len() != grid.m() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrices, got {}",
                grid.m(),
                mats.len()
            )));
        }
        let q = mats.first().map_or(0, DMatrix::nrows);
        if q == 0 {
            return Err(Error::DimensionMismatch("empty spectral sequence".into()));
        }
        for (j, m) in mats.iter().enumerate() {
            if m.nrows() != q || m.ncols() != q {
                return Err(Error::DimensionMismatch(format!(
                    "matrix at frequency index {} is {}x{}, expected {q}x{q}",
                    j + 1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { grid, mats })
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn mats(&self) -> &[DMatrix<Complex64>] {
        &self.mats
    }

    pub fn m(&self) -> usize {
        self.grid.m()
    }

    pub fn q(&self) -> usize {
        self.mats[0].nrows()
    }

    /// Largest entrywise deviation from Hermitian symmetry across all
    /// frequencies.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let q = self.q();
        let mut worst = 0.0f64;
        for m in &self.mats {
            for r in 0..q {
                for s in 0..q {
                    worst = worst.max((m[(r, s)] - m[(s, r)].conj()).norm());
                }
            }
        }
        worst
    }

    /// Smallest Hermitian eigenvalue across all frequencies.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mats
            .iter()
            .flat_map(|m| {
                let eig = m.clone().symmetric_eigen();
                eig.eigenvalues.iter().copied().collect::<Vec<_>>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Check the Hermitian (1e-12) and positive-semidefinite (-1e-10)
    /// tolerances every estimator in this crate is required to satisfy.
    pub fn validate(&self) -> Result<()> {
        let herm = self.max_hermitian_deviation();
        if herm > 1e-12 {
            return Err(Error::DimensionMismatch(format!(
                "spectral sequence deviates from Hermitian symmetry by {herm}"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -1e-10 {
            return Err(Error::DimensionMismatch(format!(
                "spectral sequence has negative eigenvalue {min_eig}"
            )));
        }
        Ok(())
    }
}

/// Fill the strictly-lower triangle with the conjugate of the upper one, so
/// Hermitian symmetry holds exactly by construction.
pub(crate) fn hermitian_from_upper(mat: &mut DMatrix<Complex64>) {
    let q = mat.nrows();
    for r in 0..q {
        for s in 0..r {
            mat[(r, s)] = mat[(s, r)].conj();
        }
    }
}

/// Rank-one outer products `w(lambda_j) w(lambda_j)*` over the grid.
pub(crate) fn outer_sequence(table: &DftTable, grid: &FourierGrid) -> Result<SpectralSequence> {
    let q = table.q();
    let mut mats = Vec::with_capacity(grid.m());
    for j in 1..=grid.m() {
        let w = table.at(j);
        let mut mat = DMatrix::<Complex64>::zeros(q, q);
        for r in 0..q {
            for s in r..q {
                mat[(r, s)] = w[r] * w[s].conj();
            }
        }
        hermitian_from_upper(&mut mat);
        mats.push(mat);
    }
    SpectralSequence::new(grid.clone(), mats)
}

/// Which spectral estimator to plug into the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralEstimator {
    Periodogram,
    TaperedCosineBell,
    SmoothedBartlett { ell: usize, exclude_minus_j: bool },
}

/// Compute the chosen estimator on an already-demeaned series.
pub fn estimate_spectrum(
    series: &MultivariateSeries,
    grid: &FourierGrid,
    estimator: &SpectralEstimator,
) -> Result<SpectralSequence> {
    match estimator {
        SpectralEstimator::Periodogram => periodogram(series, grid),
        SpectralEstimator::TaperedCosineBell => {
            let taper = cosine_bell_taper(series.n(), series.q())?;
            tapered_periodogram(series, grid, &taper)
        }
        SpectralEstimator::SmoothedBartlett {
            ell,
            exclude_minus_j,
        } => {
            let weights = bartlett_weights(series.n(), *ell)?.with_exclude_minus_j(*exclude_minus_j);
            smoothed_periodogram(series, grid, &weights)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn random_series(n: usize, q: usize, seed: u64) -> MultivariateSeries {
        let mut rng = crate::rng::stream_rng(seed);
        let values: Vec<f64> = (0..n * q).map(|_| StandardNormal.sample(&mut rng)).collect();
        MultivariateSeries::from_flat(n, q, values).unwrap().demean()
    }

    #[test]
    fn all_estimators_are_hermitian_and_psd() {
        let x = random_series(128, 2, 61);
        let grid = FourierGrid::new(128, 40).unwrap();
        let estimators = [
            SpectralEstimator::Periodogram,
            SpectralEstimator::TaperedCosineBell,
            SpectralEstimator::SmoothedBartlett {
                ell: 8,
                exclude_minus_j: false,
            },
            SpectralEstimator::SmoothedBartlett {
                ell: 8,
                exclude_minus_j: true,
            },
        ];
        for est in &estimators {
            let seq = estimate_spectrum(&x, &grid, est).unwrap();
            assert!(seq.max_hermitian_deviation() <= 1e-12, "{est:?}");
            seq.validate().unwrap_or_else(|e| panic!("{est:?}: {e}"));
        }
    }
}
