//! Multivariate observation matrices and column centering.

use crate::error::{Error, Result};

/// An `n x q` block of real-valued observations, time along rows.
///
/// Entries are validated to be finite on construction; `n >= 2`, `q >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSeries {
    values: Vec<f64>, // row-major
    n: usize,
    q: usize,
}

impl MultivariateSeries {
    /// Build from a row-major flat buffer of length `n * q`.
    pub fn from_flat(n: usize, q: usize, values: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSeries(format!(
                "sample size n = {n} must be at least 2"
            )));
        }
        if q < 1 {
            return Err(Error::InvalidSeries("dimension q must be at least 1".into()));
        }
        if values.len() != n * q {
            return Err(Error::InvalidSeries(format!(
                "expected {} values for an {n} x {q} series, got {}",
                n * q,
                values.len()
            )));
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / q + 1,
                    col: idx % q + 1,
                });
            }
        }
        Ok(Self { values, n, q })
    }

    /// Build from per-time rows; all rows must share the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let q = rows.first().map_or(0, Vec::len);
        for (t, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::InvalidSeries(format!(
                    "row {} has {} columns, expected {q}",
                    t + 1,
                    row.len()
                )));
            }
        }
        let mut values = Vec::with_capacity(n * q);
        for row in rows {
            values.extend_from_slice(row);
        }
        Self::from_flat(n, q, values)
    }

    /// Build from per-coordinate columns; all columns must share the same length.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let q = cols.len();
        let n = cols.first().map_or(0, Vec::len);
        for (i, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidSeries(format!(
                    "column {} has {} rows, expected {n}",
                    i + 1,
                    col.len()
                )));
            }
        }
        let mut values = vec![0.0; n * q];
        for (i, col) in cols.iter().enumerate() {
            for (t, &v) in col.iter().enumerate() {
                values[t * q + i] = v;
            }
        }
        Self::from_flat(n, q, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Observation of coordinate `i` at time index `t` (both 0-based).
    #[inline]
    pub fn value(&self, t: usize, i: usize) -> f64 {
        self.values[t * self.q + i]
    }

    /// Row (time point) `t` as a slice of length `q`.
    #[inline]
    pub fn row(&self, t: usize) -> &[f64] {
        &self.values[t * self.q..(t + 1) * self.q]
    }

    /// Copy of column `i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|t| self.value(t, i)).collect()
    }

    /// Sample mean of every column, via compensated summation.
    pub fn column_means(&self) -> Vec<f64> {
        (0..self.q)
            .map(|i| neumaier_sum((0..self.n).map(|t| self.value(t, i))) / self.n as f64)
            .collect()
    }

    /// Subtract the sample mean from every column.
    ///
    /// A column whose compensated mean is already below `eps * (1 + max|x|)`
    /// is left untouched, which makes the operation idempotent bit-for-bit:
    /// a second call always returns its input unchanged.
    pub fn demean(&self) -> MultivariateSeries {
        let mut values = self.values.clone();
        for i in 0..self.q {
            demean_column(&mut values, self.n, self.q, i);
        }
        MultivariateSeries {
            values,
            n: self.n,
            q: self.q,
        }
    }

    /// Every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> MultivariateSeries {
        MultivariateSeries {
            values: self.values.iter().map(|v| v * c).collect(),
            n: self.n,
            q: self.q,
        }
    }

    /// Every entry shifted by a per-coordinate constant.
    pub fn shifted(&self, offsets: &[f64]) -> MultivariateSeries {
        assert_eq!(offsets.len(), self.q);
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, v)| v + offsets[idx % self.q])
            .collect();
        MultivariateSeries {
            values,
            n: self.n,
            q: self.q,
        }
    }

    /// Series with coordinates reordered as `perm` (`perm[new] = old`).
    pub fn permuted(&self, perm: &[usize]) -> MultivariateSeries {
        assert_eq!(perm.len(), self.q);
        let mut values = Vec::with_capacity(self.values.len());
        for t in 0..self.n {
            for &old in perm {
                values.push(self.value(t, old));
            }
        }
        MultivariateSeries {
            values,
            n: self.n,
            q: self.q,
        }
    }
}

fn demean_column(values: &mut [f64], n: usize, q: usize, i: usize) {
    let max_abs = (0..n).fold(0.0f64, |acc, t| acc.max(values[t * q + i].abs()));
    let zero_tol = f64::EPSILON * (1.0 + max_abs);
    // A couple of correction passes push the residual mean to the level where
    // further subtraction would not change any entry.
    for _ in 0..4 {
        let mean = neumaier_sum((0..n).map(|t| values[t * q + i])) / n as f64;
        if mean.abs() <= zero_tol {
            return;
        }
        for t in 0..n {
            values[t * q + i] -= mean;
        }
    }
}

/// Neumaier-compensated summation.
fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
