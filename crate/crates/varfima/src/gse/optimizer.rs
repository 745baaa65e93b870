//! Two-stage minimization of the objective over the admissible box:
//! an exhaustive coarse grid followed by a bounded Nelder-Mead refinement.

use crate::gse::{
    asymptotic_covariance, g_hat, objective, objective_from_g, EstimateResult, ObjectiveContext,
};
use crate::params::{MemoryParams, ThetaBounds};
use nalgebra::DMatrix;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy)]
pub struct MinimizeSettings {
    /// Step of the coarse grid per coordinate.
    pub grid_step: f64,
    /// Refinement stops when the simplex diameter (max pairwise
    /// sup-distance) falls below this.
    pub simplex_tol: f64,
    /// Refinement iteration cap.
    pub max_iterations: usize,
}

impl Default for MinimizeSettings {
    fn default() -> Self {
        Self {
            grid_step: 0.05,
            simplex_tol: 1e-6,
            max_iterations: 500,
        }
    }
}

/// Minimize the objective over `Theta` with the default settings.
pub fn minimize(ctx: &ObjectiveContext, bounds: &ThetaBounds) -> EstimateResult {
    minimize_with(ctx, bounds, &MinimizeSettings::default())
}

/// Minimize with explicit settings. Fully deterministic: the grid stage scans
/// points in lexicographic order (lowest point wins ties) and the simplex
/// refinement breaks value ties lexicographically.
pub fn minimize_with(
    ctx: &ObjectiveContext,
    bounds: &ThetaBounds,
    settings: &MinimizeSettings,
) -> EstimateResult {
    let q = ctx.q();
    let axis = axis_points(bounds, settings.grid_step);
    let start = grid_search(ctx, &axis, q);
    let (point, value, iterations, diameter_ok) = nelder_mead(ctx, bounds, &start, settings);
    let d_hat = MemoryParams::new(point).expect("clamped point lies inside (-1/2, 1/2)");
    let g = g_hat(&d_hat, ctx);
    let asymptotic_sd = asymptotic_covariance(&g, ctx.m())
        .ok()
        .and_then(|ac| ac.standard_errors().ok());
    EstimateResult {
        converged: diameter_ok && value.is_finite(),
        d_hat,
        objective_value: value,
        g_hat: g,
        iterations,
        asymptotic_sd,
    }
}

/// Grid coordinates `lower, lower + step, ...` plus the upper endpoint, each
/// built from its integer index.
fn axis_points(bounds: &ThetaBounds, step: f64) -> Vec<f64> {
    let (lo, hi) = (bounds.lower(), bounds.upper());
    let mut axis = Vec::new();
    let mut i = 0usize;
    loop {
        let v = lo + i as f64 * step;
        if v >= hi - 1e-12 {
            break;
        }
        axis.push(v);
        i += 1;
    }
    axis.push(hi);
    axis
}

/// Power and phase tables over the grid axis, so the coarse scan avoids
/// per-point transcendentals: `lambda^{d_r + d_s} = pow[r] * pow[s]` and the
/// phase splits by the angle-subtraction identities.
struct AxisTables {
    pow: Vec<Vec<f64>>,
    cos_p: Vec<Vec<f64>>,
    sin_p: Vec<Vec<f64>>,
}

impl AxisTables {
    fn new(ctx: &ObjectiveContext, axis: &[f64]) -> Self {
        let m = ctx.m();
        let mut pow = Vec::with_capacity(axis.len());
        let mut cos_p = Vec::with_capacity(axis.len());
        let mut sin_p = Vec::with_capacity(axis.len());
        for &v in axis {
            let mut p = Vec::with_capacity(m);
            let mut c = Vec::with_capacity(m);
            let mut s = Vec::with_capacity(m);
            for j in 0..m {
                p.push((v * ctx.ln_lambda()[j]).exp());
                let (sj, cj) = (v * ctx.phase_arg()[j]).sin_cos();
                c.push(cj);
                s.push(sj);
            }
            pow.push(p);
            cos_p.push(c);
            sin_p.push(s);
        }
        Self { pow, cos_p, sin_p }
    }

    fn g_at(&self, ctx: &ObjectiveContext, idx: &[usize]) -> DMatrix<f64> {
        let q = idx.len();
        let m = ctx.m();
        let mut g = DMatrix::<f64>::zeros(q, q);
        for r in 0..q {
            for s in r..q {
                let (re, im) = ctx.entry(r, s);
                let pr = &self.pow[idx[r]];
                let ps = &self.pow[idx[s]];
                let mut acc = 0.0;
                if r == s {
                    for j in 0..m {
                        acc += pr[j] * ps[j] * re[j];
                    }
                } else {
                    let (cr, sr) = (&self.cos_p[idx[r]], &self.sin_p[idx[r]]);
                    let (cs, ss) = (&self.cos_p[idx[s]], &self.sin_p[idx[s]]);
                    for j in 0..m {
                        // cos/sin of (d_r - d_s) * phase_arg via subtraction
                        // identities on the tabulated per-coordinate angles.
                        let cos_b = cr[j] * cs[j] + sr[j] * ss[j];
                        let sin_b = sr[j] * cs[j] - cr[j] * ss[j];
                        acc += pr[j] * ps[j] * (cos_b * re[j] - sin_b * im[j]);
                    }
                }
                let v = acc / m as f64;
                g[(r, s)] = v;
                g[(s, r)] = v;
            }
        }
        g
    }
}

fn grid_search(ctx: &ObjectiveContext, axis: &[f64], q: usize) -> Vec<f64> {
    let tables = AxisTables::new(ctx, axis);
    let mut idx = vec![0usize; q];
    let mut best_val = f64::INFINITY;
    let mut best_point = vec![axis[0]; q];
    loop {
        let point: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let g = tables.g_at(ctx, &idx);
        let val = objective_from_g(&g, &point, ctx.mean_log_lambda());
        // Strict improvement only: lexicographic scan order makes the lowest
        // point win exact ties.
        if val < best_val {
            best_val = val;
            best_point = point;
        }
        // Odometer with the last coordinate fastest keeps the scan
        // lexicographic in the point.
        let mut k = q;
        loop {
            if k == 0 {
                return best_point;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn vertex_cmp(a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)) -> Ordering {
    a.1.partial_cmp(&b.1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| lex_cmp(&a.0, &b.0))
}

fn eval(ctx: &ObjectiveContext, point: &[f64]) -> f64 {
    let d = MemoryParams::new(point.to_vec()).expect("point inside (-1/2, 1/2)");
    objective(&d, ctx)
}

fn diameter(vertices: &[(Vec<f64>, f64)]) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let dist = vertices[a]
                .0
                .iter()
                .zip(&vertices[b].0)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            worst = worst.max(dist);
        }
    }
    worst
}

/// Nelder-Mead with reflection 1, expansion 2, contraction 1/2 and shrink
/// 1/2; every candidate is projected back into the box before evaluation.
fn nelder_mead(
    ctx: &ObjectiveContext,
    bounds: &ThetaBounds,
    start: &[f64],
    settings: &MinimizeSettings,
) -> (Vec<f64>, f64, usize, bool) {
    let q = start.len();
    let h = settings.grid_step / 2.0;
    let mut vertices: Vec<(Vec<f64>, f64)> = Vec::with_capacity(q + 1);
    let x0 = bounds.clamp_vec(start);
    vertices.push((x0.clone(), eval(ctx, &x0)));
    for k in 0..q {
        let mut x = x0.clone();
        x[k] = if x[k] + h <= bounds.upper() { x[k] + h } else { x[k] - h };
        let x = bounds.clamp_vec(&x);
        let f = eval(ctx, &x);
        vertices.push((x, f));
    }

    let mut iterations = 0usize;
    let mut converged = false;
    while iterations < settings.max_iterations {
        vertices.sort_by(vertex_cmp);
        if diameter(&vertices) < settings.simplex_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let worst = vertices[q].clone();
        let second_worst_f = vertices[q - 1].1;
        let best_f = vertices[0].1;
        let centroid: Vec<f64> = (0..q)
            .map(|k| vertices[..q].iter().map(|(x, _)| x[k]).sum::<f64>() / q as f64)
            .collect();

        let shift = |coef: f64| -> Vec<f64> {
            let cand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + coef * (c - w))
                .collect();
            bounds.clamp_vec(&cand)
        };

        let xr = shift(1.0);
        let fr = eval(ctx, &xr);
        if fr < best_f {
            let xe = shift(2.0);
            let fe = eval(ctx, &xe);
            vertices[q] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < second_worst_f {
            vertices[q] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = shift(0.5); // outside contraction
                let f = eval(ctx, &x);
                (x, f)
            } else {
                let x = shift(-0.5); // inside contraction
                let f = eval(ctx, &x);
                (x, f)
            };
            if fc < fr.min(worst.1) {
                vertices[q] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = vertices[0].0.clone();
                for v in vertices.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&v.0)
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    let x = bounds.clamp_vec(&x);
                    let f = eval(ctx, &x);
                    *v = (x, f);
                }
            }
        }
    }
    vertices.sort_by(vertex_cmp);
    let (best_point, best_value) = vertices.swap_remove(0);
    (best_point, best_value, iterations, converged)
}
