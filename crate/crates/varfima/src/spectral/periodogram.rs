//! The ordinary periodogram.

use crate::error::{Error, Result};
use crate::grid::FourierGrid;
use crate::series::MultivariateSeries;
use crate::spectral::dft::DftTable;
use crate::spectral::{outer_sequence, SpectralSequence};

/// `I_n(lambda_j) = w_n(lambda_j) w_n(lambda_j)*` for every grid frequency.
///
/// Each matrix is Hermitian, positive semidefinite and of rank at most one.
pub fn periodogram(series: &MultivariateSeries, grid: &FourierGrid) -> Result<SpectralSequence> {
    if grid.n() != series.n() {
        return Err(Error::DimensionMismatch(format!(
            "grid n = {} but series n = {}",
            grid.n(),
            series.n()
        )));
    }
    let table = DftTable::new(series);
    outer_sequence(&table, grid)
}
