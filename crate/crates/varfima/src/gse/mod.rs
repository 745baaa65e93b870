//! The Gaussian semiparametric objective and its minimizer.
//!
//! Given a spectral-density estimate `f_n(lambda_j)` over the first `m`
//! Fourier frequencies, the estimate of the fractional differencing vector
//! minimizes
//!
//! ```text
//! S(d) = log det G_hat(d) - 2 sum_k d_k (1/m) sum_j log lambda_j,
//! G_hat(d) = (1/m) sum_j Re[ Lambda_j(d)^{-1} f_n(lambda_j) Lambda_j(d)^{-*} ],
//! ```
//!
//! over the admissible box `Theta`, where `Lambda_j(d)` is the diagonal
//! local model `lambda_j^{-d_k} e^{i (pi - lambda_j) d_k / 2}`.

mod optimizer;

pub use optimizer::{minimize, minimize_with, MinimizeSettings};

use crate::error::{Error, Result};
use crate::grid::{halfwidth_from_exponent, FourierGrid};
use crate::method::Method;
use crate::params::{MemoryParams, ThetaBounds};
use crate::series::MultivariateSeries;
use crate::spectral::{estimate_spectrum, periodogram, SpectralEstimator, SpectralSequence};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// The inverse of the local phase/scale model: a diagonal matrix with
/// entries `lambda^{d_k} e^{i (lambda - pi) d_k / 2}`.
pub fn lambda_inverse(d: &MemoryParams, lambda: f64) -> DMatrix<Complex64> {
    let diag: Vec<Complex64> = d
        .values()
        .iter()
        .map(|&dk| Complex64::from_polar(lambda.powf(dk), (lambda - PI) * dk / 2.0))
        .collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

const fn tri_len(q: usize) -> usize {
    q * (q + 1) / 2
}

#[inline]
const fn tri_index(r: usize, s: usize, q: usize) -> usize {
    // r <= s; rows of the upper triangle laid out consecutively.
    r * q - r * (r + 1) / 2 + s
}

/// Precomputed state for evaluating the objective many times on one
/// spectral estimate.
pub struct ObjectiveContext {
    seq: SpectralSequence,
    q: usize,
    m: usize,
    mean_log_lambda: f64,
    ln_lambda: Vec<f64>,
    /// `(lambda_j - pi) / 2`, the per-frequency phase coefficient.
    phase_arg: Vec<f64>,
    /// Upper-triangular spectral entries split into real and imaginary
    /// parts, one flat vector per `(r, s)` pair.
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl ObjectiveContext {
    pub fn new(seq: SpectralSequence) -> Self {
        let m = seq.m();
        let q = seq.q();
        let ln_lambda: Vec<f64> = seq.grid().freqs().iter().map(|l| l.ln()).collect();
        let mean_log_lambda = ln_lambda.iter().sum::<f64>() / m as f64;
        let phase_arg: Vec<f64> = seq.grid().freqs().iter().map(|l| (l - PI) / 2.0).collect();
        let mut re = vec![Vec::with_capacity(m); tri_len(q)];
        let mut im = vec![Vec::with_capacity(m); tri_len(q)];
        for mat in seq.mats() {
            for r in 0..q {
                for s in r..q {
                    let v = mat[(r, s)];
                    re[tri_index(r, s, q)].push(v.re);
                    im[tri_index(r, s, q)].push(v.im);
                }
            }
        }
        Self {
            seq,
            q,
            m,
            mean_log_lambda,
            ln_lambda,
            phase_arg,
            re,
            im,
        }
    }

    pub fn spectral(&self) -> &SpectralSequence {
        &self.seq
    }

    pub fn grid(&self) -> &FourierGrid {
        self.seq.grid()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(1/m) sum_j log lambda_j`.
    pub fn mean_log_lambda(&self) -> f64 {
        self.mean_log_lambda
    }

    pub(crate) fn ln_lambda(&self) -> &[f64] {
        &self.ln_lambda
    }

    pub(crate) fn phase_arg(&self) -> &[f64] {
        &self.phase_arg
    }

    pub(crate) fn entry(&self, r: usize, s: usize) -> (&[f64], &[f64]) {
        let idx = tri_index(r, s, self.q);
        (&self.re[idx], &self.im[idx])
    }
}

/// `G_hat(d)`: the frequency-averaged, phase-corrected spectral matrix. The
/// `(r, s)` entry is
/// `(1/m) sum_j Re[ e^{i (lambda_j - pi)(d_r - d_s)/2} lambda_j^{d_r + d_s} f_n^{rs}(lambda_j) ]`,
/// real and symmetric by construction.
pub fn g_hat(d: &MemoryParams, ctx: &ObjectiveContext) -> DMatrix<f64> {
    assert_eq!(d.q(), ctx.q, "parameter dimension must match the spectrum");
    let q = ctx.q;
    let mut g = DMatrix::<f64>::zeros(q, q);
    for r in 0..q {
        for s in r..q {
            let (re, im) = ctx.entry(r, s);
            let a = d.get(r) + d.get(s);
            let mut acc = 0.0;
            if r == s {
                for j in 0..ctx.m {
                    acc += (a * ctx.ln_lambda[j]).exp() * re[j];
                }
            } else {
                let b = d.get(r) - d.get(s);
                for j in 0..ctx.m {
                    let scale = (a * ctx.ln_lambda[j]).exp();
                    let (sin_p, cos_p) = (b * ctx.phase_arg[j]).sin_cos();
                    acc += scale * (cos_p * re[j] - sin_p * im[j]);
                }
            }
            let v = acc / ctx.m as f64;
            g[(r, s)] = v;
            g[(s, r)] = v;
        }
    }
    g
}

pub(crate) fn objective_from_g(g: &DMatrix<f64>, d: &[f64], mean_log_lambda: f64) -> f64 {
    let det = g.determinant();
    if !det.is_finite() || det <= 0.0 {
        // Infeasible point; the optimizer routes around it.
        return f64::INFINITY;
    }
    det.ln() - 2.0 * d.iter().sum::<f64>() * mean_log_lambda
}

/// The objective `S(d)`. Returns `+inf` when `det G_hat(d) <= 0`.
pub fn objective(d: &MemoryParams, ctx: &ObjectiveContext) -> f64 {
    let g = g_hat(d, ctx);
    objective_from_g(&g, d.values(), ctx.mean_log_lambda)
}

/// The objective built from the ordinary periodogram of the series; the
/// plain-periodogram estimator as a first-class label.
pub fn shimotsu_objective(
    d: &MemoryParams,
    series: &MultivariateSeries,
    grid: &FourierGrid,
) -> Result<f64> {
    let seq = periodogram(series, grid)?;
    Ok(objective(d, &ObjectiveContext::new(seq)))
}

/// `Sigma` from the limiting distribution `sqrt(m) (d_hat - d0) -> N(0, Sigma^{-1})`
/// together with the plug-in covariance `Sigma^{-1} / m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCovariance {
    pub sigma: DMatrix<f64>,
    pub covariance: DMatrix<f64>,
}

impl AsymptoticCovariance {
    /// Per-coordinate standard errors `sqrt(diag(Sigma^{-1} / m))`.
    pub fn standard_errors(&self) -> Result<Vec<f64>> {
        self.covariance
            .diagonal()
            .iter()
            .map(|&v| {
                if v >= 0.0 {
                    Ok(v.sqrt())
                } else {
                    Err(Error::SingularMatrix(
                        "asymptotic covariance has a negative diagonal entry".into(),
                    ))
                }
            })
            .collect()
    }
}

/// `Sigma = 2 [ G0ated G0^{-1} + I + (pi^2/4)(G0ated G0^{-1} - I) ]` with
/// `ated` the Hadamard (entrywise) product, and `covariance = Sigma^{-1}/m`.
pub fn asymptotic_covariance(g0: &DMatrix<f64>, m: usize) -> Result<AsymptoticCovariance> {
    let q = g0.nrows();
    if g0.ncols() != q || q == 0 {
        return Err(Error::DimensionMismatch("g0 must be square".into()));
    }
    if m == 0 {
        return Err(Error::InvalidBandwidth("m must be positive".into()));
    }
    let g_inv = g0
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("g0 is singular".into()))?;
    let hadamard = g0.component_mul(&g_inv);
    let eye = DMatrix::<f64>::identity(q, q);
    let sigma = 2.0 * (&hadamard + &eye + (PI * PI / 4.0) * (&hadamard - &eye));
    let sigma_inv = sigma
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("sigma is singular".into()))?;
    let covariance = sigma_inv / m as f64;
    Ok(AsymptoticCovariance { sigma, covariance })
}

/// Outcome of one minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub d_hat: MemoryParams,
    pub objective_value: f64,
    pub g_hat: DMatrix<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Plug-in standard errors from `Sigma^{-1}/m` with `G0 ~ G_hat(d_hat)`;
    /// absent when that matrix cannot be inverted.
    pub asymptotic_sd: Option<Vec<f64>>,
}

/// The spectral estimator a method label stands for. Smoothed methods derive
/// their half-width from `beta` via `ell = floor(n^beta)`.
pub fn estimator_for_method(
    n: usize,
    method: Method,
    beta: Option<f64>,
) -> Result<SpectralEstimator> {
    match method {
        Method::Sh => Ok(SpectralEstimator::Periodogram),
        Method::TSh => Ok(SpectralEstimator::TaperedCosineBell),
        Method::SSh | Method::SShStar => {
            let beta = beta.ok_or_else(|| {
                Error::InvalidWindow(format!(
                    "method {} requires a smoothing exponent beta",
                    method.label()
                ))
            })?;
            Ok(SpectralEstimator::SmoothedBartlett {
                ell: halfwidth_from_exponent(n, beta)?,
                exclude_minus_j: method == Method::SSh,
            })
        }
    }
}

/// Full pipeline: demean, compute the method's spectral estimate over the
/// first `m` frequencies, and minimize the objective over `Theta`.
pub fn estimate_with_method(
    series: &MultivariateSeries,
    method: Method,
    m: usize,
    beta: Option<f64>,
    bounds: &ThetaBounds,
) -> Result<EstimateResult> {
    let demeaned = series.demean();
    let grid = FourierGrid::new(demeaned.n(), m)?;
    let estimator = estimator_for_method(demeaned.n(), method, beta)?;
    let seq = estimate_spectrum(&demeaned, &grid, &estimator)?;
    Ok(minimize(&ObjectiveContext::new(seq), bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;
    use approx::assert_abs_diff_eq;
    use rand_distr::{Distribution, StandardNormal};

    fn random_series(n: usize, q: usize, seed: u64) -> MultivariateSeries {
        let mut rng = crate::rng::stream_rng(seed);
        let values: Vec<f64> = (0..n * q).map(|_| StandardNormal.sample(&mut rng)).collect();
        MultivariateSeries::from_flat(n, q, values).unwrap().demean()
    }

    fn identity_sequence(n: usize, m: usize, q: usize) -> SpectralSequence {
        let grid = FourierGrid::new(n, m).unwrap();
        let mats = (0..m)
            .map(|_| DMatrix::<Complex64>::identity(q, q))
            .collect();
        SpectralSequence::new(grid, mats).unwrap()
    }

    #[test]
    fn lambda_inverse_identity_at_zero_memory() {
        let d = MemoryParams::new(vec![0.0, 0.0]).unwrap();
        let l = lambda_inverse(&d, PI / 3.0);
        for r in 0..2 {
            for s in 0..2 {
                let expected = if r == s { Complex64::ONE } else { Complex64::ZERO };
                assert!((l[(r, s)] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn lambda_inverse_real_at_pi() {
        let d = MemoryParams::new(vec![0.3, -0.2]).unwrap();
        let l = lambda_inverse(&d, PI);
        assert_abs_diff_eq!(l[(0, 0)].re, PI.powf(0.3), epsilon = 1e-14);
        assert_abs_diff_eq!(l[(1, 1)].re, PI.powf(-0.2), epsilon = 1e-14);
        assert!(l[(0, 0)].im.abs() < 1e-14);
        assert!(l[(1, 1)].im.abs() < 1e-14);
    }

    #[test]
    fn lambda_inverse_polar_form() {
        let d = MemoryParams::new(vec![0.4]).unwrap();
        let lambda = PI / 4.0;
        let l = lambda_inverse(&d, lambda);
        assert_abs_diff_eq!(l[(0, 0)].norm(), lambda.powf(0.4), epsilon = 1e-14);
        assert_abs_diff_eq!(l[(0, 0)].arg(), (lambda - PI) * 0.2, epsilon = 1e-14);
    }

    #[test]
    fn g_hat_at_zero_is_average_real_part() {
        let x = random_series(64, 2, 77);
        let grid = FourierGrid::new(64, 20).unwrap();
        let seq = periodogram(&x, &grid).unwrap();
        let mut expected = DMatrix::<f64>::zeros(2, 2);
        for mat in seq.mats() {
            for r in 0..2 {
                for s in 0..2 {
                    expected[(r, s)] += mat[(r, s)].re;
                }
            }
        }
        expected /= grid.m() as f64;
        let ctx = ObjectiveContext::new(seq);
        let g = g_hat(&MemoryParams::new(vec![0.0, 0.0]).unwrap(), &ctx);
        for r in 0..2 {
            for s in 0..2 {
                assert_abs_diff_eq!(g[(r, s)], expected[(r, s)], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn scalar_hand_case_via_lambda_inverse() {
        // q = 1, m = 2, f = {1, 2} at lambda = {pi/2, pi}: averaging
        // Re[Lambda^{-1} f conj(Lambda^{-1})] at d just inside the upper
        // boundary gives (1/2)[(pi/2) * 1 + pi * 2] = pi/4 + pi.
        // (lambda = pi sits on the grid's Nyquist edge, so the hand value is
        // checked through lambda_inverse directly.)
        let dv = 0.5 - 1e-12;
        let d = MemoryParams::new(vec![dv]).unwrap();
        let f = [1.0, 2.0];
        let lambdas = [PI / 2.0, PI];
        let mut acc = 0.0;
        for (lam, fv) in lambdas.iter().zip(&f) {
            let l_inv = lambda_inverse(&d, *lam)[(0, 0)];
            acc += (l_inv * Complex64::new(*fv, 0.0) * l_inv.conj()).re;
        }
        let g = acc / 2.0;
        assert_abs_diff_eq!(g, PI / 4.0 + PI, epsilon = 1e-9);

        // The matching objective value: log G - 2 d mean(log lambda).
        let hand = (PI / 4.0 + PI).ln() - 2.0 * dv * 0.5 * ((PI / 2.0).ln() + PI.ln());
        let s_val = g.ln() - 2.0 * dv * 0.5 * ((PI / 2.0).ln() + PI.ln());
        assert_abs_diff_eq!(s_val, hand, epsilon = 1e-9);
    }

    #[test]
    fn g_hat_scalar_formula_on_a_valid_grid() {
        // Same algebra exercised through ObjectiveContext on an admissible
        // grid: n = 8, m = 2 puts lambda at {pi/4, pi/2}.
        let grid = FourierGrid::new(8, 2).unwrap();
        assert_eq!(grid.freq(1), PI / 4.0);
        assert_eq!(grid.freq(2), PI / 2.0);
        let mats = vec![
            DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
            DMatrix::from_element(1, 1, Complex64::new(2.0, 0.0)),
        ];
        let seq = SpectralSequence::new(grid, mats).unwrap();
        let ctx = ObjectiveContext::new(seq);
        let dv = 0.3;
        let d = MemoryParams::new(vec![dv]).unwrap();
        let g = g_hat(&d, &ctx);
        let expected = 0.5 * ((PI / 4.0).powf(2.0 * dv) + (PI / 2.0).powf(2.0 * dv) * 2.0);
        assert_abs_diff_eq!(g[(0, 0)], expected, epsilon = 1e-14);
        let s_val = objective(&d, &ctx);
        let hand = expected.ln() - 2.0 * dv * 0.5 * ((PI / 4.0).ln() + (PI / 2.0).ln());
        assert_abs_diff_eq!(s_val, hand, epsilon = 1e-14);
    }

    #[test]
    fn g_hat_is_symmetric() {
        let x = random_series(128, 3, 5);
        let grid = FourierGrid::new(128, 40).unwrap();
        let ctx = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
        let d = MemoryParams::new(vec![0.3, -0.1, 0.45]).unwrap();
        let g = g_hat(&d, &ctx);
        for r in 0..3 {
            for s in 0..3 {
                assert!((g[(r, s)] - g[(s, r)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn objective_zero_for_identity_spectrum() {
        let ctx = ObjectiveContext::new(identity_sequence(64, 20, 2));
        let d = MemoryParams::new(vec![0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(objective(&d, &ctx), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn objective_scale_shift_identity() {
        // S(d; c X) = S(d; X) + 2 q log c for every d.
        let x = random_series(256, 2, 31);
        let grid = FourierGrid::new(256, 60).unwrap();
        let c = 10.0;
        let ctx_base = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
        let ctx_scaled = ObjectiveContext::new(periodogram(&x.scaled(c), &grid).unwrap());
        let shift = 2.0 * 2.0 * c.ln();
        for d in [
            vec![0.0, 0.0],
            vec![0.3, -0.2],
            vec![-0.45, 0.45],
            vec![0.1, 0.1],
        ] {
            let d = MemoryParams::new(d).unwrap();
            let lhs = objective(&d, &ctx_scaled);
            let rhs = objective(&d, &ctx_base) + shift;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
        }
    }

    #[test]
    fn shimotsu_objective_equals_periodogram_objective() {
        let x = random_series(200, 2, 13);
        let grid = FourierGrid::new(200, 50).unwrap();
        let ctx = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
        for d in [vec![0.2, 0.4], vec![-0.3, 0.1]] {
            let d = MemoryParams::new(d).unwrap();
            let direct = shimotsu_objective(&d, &x, &grid).unwrap();
            let via_ctx = objective(&d, &ctx);
            assert!((direct - via_ctx).abs() < 1e-14);
        }
    }

    #[test]
    fn univariate_reduction_is_local_whittle() {
        // For q = 1 the objective is log G_hat(d) - 2 d * mean log lambda.
        let x = random_series(128, 1, 99);
        let grid = FourierGrid::new(128, 30).unwrap();
        let ctx = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
        let d = MemoryParams::new(vec![0.25]).unwrap();
        let g = g_hat(&d, &ctx);
        let expected = g[(0, 0)].ln() - 2.0 * 0.25 * ctx.mean_log_lambda();
        assert_abs_diff_eq!(objective(&d, &ctx), expected, epsilon = 1e-14);
    }

    #[test]
    fn white_noise_prefers_zero_memory() {
        // R(0) < R(0.4) for nearly every white-noise draw.
        let mut hits = 0;
        let total = 100;
        let m = crate::grid::bandwidth_from_exponent(1000, 0.85).unwrap();
        let grid = FourierGrid::new(1000, m).unwrap();
        let d0 = MemoryParams::new(vec![0.0]).unwrap();
        let d4 = MemoryParams::new(vec![0.4]).unwrap();
        for seed in 0..total {
            let x = random_series(1000, 1, 1000 + seed);
            let ctx = ObjectiveContext::new(periodogram(&x, &grid).unwrap());
            if objective(&d0, &ctx) < objective(&d4, &ctx) {
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/{total} draws preferred d = 0");
    }

    #[test]
    fn asymptotic_covariance_identity_case() {
        let g0 = DMatrix::<f64>::identity(2, 2);
        let ac = asymptotic_covariance(&g0, 354).unwrap();
        for r in 0..2 {
            for s in 0..2 {
                let expected = if r == s { 4.0 } else { 0.0 };
                assert_abs_diff_eq!(ac.sigma[(r, s)], expected, epsilon = 1e-12);
            }
        }
        let se = ac.standard_errors().unwrap();
        let expected_sd = 1.0 / (2.0 * (354f64).sqrt());
        assert_abs_diff_eq!(se[0], expected_sd, epsilon = 1e-12);
        assert!((se[0] - 0.02657).abs() < 5e-6);
    }

    #[test]
    fn asymptotic_covariance_correlated_case() {
        // G0 = [[1, .6], [.6, 1]]; hand-build Sigma from the inverse
        // (1/0.64) [[1, -.6], [-.6, 1]] and the Hadamard product.
        let g0 = DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 1.0]);
        let ac = asymptotic_covariance(&g0, 100).unwrap();
        let had = DMatrix::from_row_slice(
            2,
            2,
            &[1.0 / 0.64, -0.36 / 0.64, -0.36 / 0.64, 1.0 / 0.64],
        );
        let eye = DMatrix::<f64>::identity(2, 2);
        let expected = 2.0 * (&had + &eye + (PI * PI / 4.0) * (&had - &eye));
        for r in 0..2 {
            for s in 0..2 {
                assert_abs_diff_eq!(ac.sigma[(r, s)], expected[(r, s)], epsilon = 1e-10);
            }
        }
        // Symmetric positive definite.
        let eigs = ac.sigma.clone().symmetric_eigen().eigenvalues;
        assert!(eigs.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn sigma_positive_definite_across_rho() {
        let mut rho = -0.95;
        while rho < 0.96 {
            let g0 = sim::equicorrelation(2, rho);
            let ac = asymptotic_covariance(&g0, 10).unwrap();
            let sym_dev = (ac.sigma.clone() - ac.sigma.transpose()).abs().max();
            assert!(sym_dev < 1e-12);
            let eigs = ac.sigma.clone().symmetric_eigen().eigenvalues;
            assert!(eigs.iter().all(|&v| v > 0.0), "rho = {rho}");
            rho += 0.05;
        }
    }

    #[test]
    fn asymptotic_covariance_rejects_singular() {
        let g0 = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(asymptotic_covariance(&g0, 10).is_err());
    }
}
