//! Multivariate long-memory toolkit.
//!
//! Estimates the fractional differencing vector `d` of a q-dimensional time
//! series by minimizing a Gaussian semiparametric (local Whittle) objective
//! built from a pluggable spectral-density estimator — ordinary, cosine-bell
//! tapered, or Bartlett-smoothed periodogram — and simulates Gaussian
//! VARFIMA(0,d,0) paths for Monte Carlo studies.
//!
//! The pieces compose as: [`sim`] generates paths; [`spectral`] turns a
//! demeaned series into a [`SpectralSequence`]; [`gse`] minimizes the
//! objective over the admissible box and attaches plug-in standard errors;
//! [`montecarlo`] runs simulate-estimate grids with reproducible per-cell
//! random streams.

pub mod error;
pub mod grid;
pub mod gse;
pub mod io;
pub mod method;
pub mod montecarlo;
pub mod params;
pub mod rng;
pub mod series;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{bandwidth_from_exponent, halfwidth_from_exponent, FourierGrid};
pub use gse::{
    asymptotic_covariance, estimate_with_method, g_hat, lambda_inverse, minimize, minimize_with,
    objective, shimotsu_objective, AsymptoticCovariance, EstimateResult, MinimizeSettings,
    ObjectiveContext,
};
pub use method::Method;
pub use montecarlo::{
    emit_raw_estimates, emit_table, run_cell, run_grid, CellKey, CellResult, CellSummary,
    ExperimentGrid,
};
pub use params::{MemoryParams, ThetaBounds};
pub use series::MultivariateSeries;
pub use sim::{
    equicorrelation, fracdiff_coeffs, simulate, simulate_with_filter, zero_phase_coeffs,
    zero_phase_kernel, FilterKind, FracdiffFilter, Varfima0Process, Varfima0Spec,
};
pub use spectral::{
    bartlett_weights, cosine_bell_taper, dft_at, periodogram, smoothed_periodogram,
    smoothed_periodogram_per_entry, tapered_periodogram, SmoothingWeights, SpectralEstimator,
    SpectralSequence, TaperKind, TaperSpec,
};
