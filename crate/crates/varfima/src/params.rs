//! Memory parameter vectors and the admissible estimation box.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A fractional differencing vector `d` with every entry in `(-1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryParams {
    d: Vec<f64>,
}

impl MemoryParams {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidMemoryParam(
                "memory parameter vector must be non-empty".into(),
            ));
        }
        for (k, v) in d.iter().enumerate() {
            if !(v.is_finite() && v.abs() < 0.5) {
                return Err(Error::InvalidMemoryParam(format!(
                    "d_{} = {v} must lie in (-1/2, 1/2)",
                    k + 1
                )));
            }
        }
        Ok(Self { d })
    }

    pub fn q(&self) -> usize {
        self.d.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.d
    }

    /// Entry `d_k` for 0-based `k`.
    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.d[k]
    }
}

/// The admissible box `Theta = [-1/2 + eps1, 1/2 - eps2]^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaBounds {
    eps1: f64,
    eps2: f64,
}

impl ThetaBounds {
    pub const DEFAULT_EPS: f64 = 1e-3;

    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        if !(eps1.is_finite() && eps2.is_finite() && eps1 > 0.0 && eps2 > 0.0) {
            return Err(Error::InvalidMemoryParam(
                "theta margins eps1, eps2 must be positive".into(),
            ));
        }
        if -0.5 + eps1 >= 0.5 - eps2 {
            return Err(Error::InvalidMemoryParam(format!(
                "empty admissible box: eps1 = {eps1}, eps2 = {eps2}"
            )));
        }
        Ok(Self { eps1, eps2 })
    }

    pub fn lower(&self) -> f64 {
        -0.5 + self.eps1
    }

    pub fn upper(&self) -> f64 {
        0.5 - self.eps2
    }

    pub fn contains(&self, d: &MemoryParams) -> bool {
        d.values()
            .iter()
            .all(|&v| self.lower() <= v && v <= self.upper())
    }

    /// Project every coordinate into the box.
    pub fn clamp_vec(&self, d: &[f64]) -> Vec<f64> {
        d.iter().map(|&v| v.clamp(self.lower(), self.upper())).collect()
    }
}

impl Default for ThetaBounds {
    fn default() -> Self {
        Self {
            eps1: Self::DEFAULT_EPS,
            eps2: Self::DEFAULT_EPS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(MemoryParams::new(vec![0.5]).is_err());
        assert!(MemoryParams::new(vec![-0.5]).is_err());
        assert!(MemoryParams::new(vec![0.6, 0.1]).is_err());
        assert!(MemoryParams::new(vec![]).is_err());
        assert!(MemoryParams::new(vec![0.499, -0.499]).is_ok());
    }

    #[test]
    fn default_box() {
        let theta = ThetaBounds::default();
        assert_eq!(theta.lower(), -0.499);
        assert_eq!(theta.upper(), 0.499);
        assert!(theta.contains(&MemoryParams::new(vec![0.0, 0.499]).unwrap()));
        assert!(!theta.contains(&MemoryParams::new(vec![0.4995]).unwrap()));
    }

    #[test]
    fn clamp_projects() {
        let theta = ThetaBounds::default();
        assert_eq!(theta.clamp_vec(&[0.7, -0.7, 0.1]), vec![0.499, -0.499, 0.1]);
    }
}
