//! Brute-force primal minimizer for tiny instances (`N ≤ 4`, `K ≤ 2`).
//!
//! The feasible set `{q : T q ∈ C}` is parameterized affinely as
//! `q = q₀(x) + Z t`, with `x` ranging over the non-degenerate box
//! coordinates and `Z` an orthonormal null-space basis of `T`. The
//! parameters are grid-searched over the bounding box of the window
//! `dom γ* ∩ [−10³, 10³]`, zooming in around the best cell until the grid
//! step reaches the requested resolution, then refined once at a ten times
//! finer step.

use nalgebra::{DMatrix, DVector};

use crate::dual::MomentProblem;
use crate::error::{Error, Result};
use crate::lp::{Lp, LpOutcome, Method};
use crate::measure::Density;

pub const MAX_POINTS: usize = 4;
pub const MAX_MOMENTS: usize = 2;
/// Half-width of the density window.
pub const WINDOW: f64 = 1e3;
const GRID: usize = 21;
/// Cells kept on each side of the best grid point when zooming.
const ZOOM_CELLS: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub q: Density,
}

/// `q = offset + basis · p`.
struct Parameterization {
    offset: DVector<f64>,
    basis: DMatrix<f64>,
    /// Bounds on the leading box coordinates of `p`.
    param_bounds: Vec<(f64, f64)>,
}

fn parameterize(problem: &MomentProblem) -> Result<Parameterization> {
    let n = problem.ground.len();
    let k = problem.dim();
    // Rows of T acting on densities: θ_k(zᵢ) rᵢ.
    let t = DMatrix::from_fn(k, n, |r, i| problem.theta.value(r, i) * problem.ground.weight(i));
    let tt = &t * t.transpose();
    let chol = tt.cholesky().ok_or_else(|| Error::InfeasibleParameterization("moment rows are dependent".into()))?;
    // Right inverse P = Tᵀ(TTᵀ)⁻¹.
    let p = t.transpose() * chol.inverse();

    let center = DVector::from_column_slice(problem.target.center());
    let radii = problem.target.radii();
    let free: Vec<usize> = (0..k).filter(|&j| radii[j] > 0.0).collect();

    let null = null_space(&t);
    let d = free.len() + null.ncols();
    let mut basis = DMatrix::zeros(n, d);
    for (c, &j) in free.iter().enumerate() {
        basis.set_column(c, &p.column(j));
    }
    for c in 0..null.ncols() {
        basis.set_column(free.len() + c, &null.column(c));
    }
    let param_bounds = free.iter().map(|&j| (center[j] - radii[j], center[j] + radii[j])).collect();
    // Free box coordinates enter through `p`, not the offset.
    let mut offset = &p * &center;
    for &j in &free {
        offset -= p.column(j) * center[j];
    }
    Ok(Parameterization { offset, basis, param_bounds })
}

/// Orthonormal basis of `{v : T v = 0}` by Gram–Schmidt against the rows.
fn null_space(t: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.ncols();
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    let mut out: Vec<DVector<f64>> = Vec::new();
    let add = |v: DVector<f64>, ortho: &mut Vec<DVector<f64>>| -> Option<DVector<f64>> {
        let mut w = v.clone();
        for _ in 0..2 {
            for o in ortho.iter() {
                w -= o * o.dot(&w);
            }
        }
        let norm = w.norm();
        if norm > 1e-9 * (1.0 + v.norm()) {
            let u = w / norm;
            ortho.push(u.clone());
            Some(u)
        } else {
            None
        }
    };
    for r in 0..t.nrows() {
        add(t.row(r).transpose(), &mut ortho);
    }
    for i in 0..n {
        if let Some(u) = add(DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 }), &mut ortho) {
            out.push(u);
        }
    }
    if out.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&out)
}

/// Per-coordinate bounds of `{p : lo ≤ offset + B p ≤ hi, p_box ∈ bounds}`
/// by LP; `None` when the set is empty.
fn bounding_box(par: &Parameterization, lo: &[f64], hi: &[f64]) -> Option<Vec<(f64, f64)>> {
    let (n, d) = par.basis.shape();
    let nb = par.param_bounds.len();
    // Columns: p⁺ (d), p⁻ (d), one slack per inequality row.
    let rows = 2 * n + 2 * nb;
    let width = 2 * d + rows;
    let mut a = vec![vec![0.0; width]; rows];
    let mut b = vec![0.0; rows];
    let mut r = 0;
    for i in 0..n {
        for (sign, bound) in [(1.0, hi[i]), (-1.0, lo[i])] {
            for j in 0..d {
                a[r][j] = sign * par.basis[(i, j)];
                a[r][d + j] = -sign * par.basis[(i, j)];
            }
            a[r][2 * d + r] = 1.0;
            b[r] = sign * (bound - par.offset[i]);
            r += 1;
        }
    }
    for (j, &(l, h)) in par.param_bounds.iter().enumerate() {
        for (sign, bound) in [(1.0, h), (-1.0, l)] {
            a[r][j] = sign;
            a[r][d + j] = -sign;
            a[r][2 * d + r] = 1.0;
            b[r] = sign * bound;
            r += 1;
        }
    }
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let mut ends = [0.0; 2];
        for (e, sign) in [(0, -1.0), (1, 1.0)] {
            let mut c = vec![0.0; width];
            c[j] = sign;
            c[d + j] = -sign;
            match (Lp { c, a: a.clone(), b: b.clone() }).solve(Method::Simplex) {
                LpOutcome::Optimal { value, .. } => ends[e] = sign * value,
                _ => return None,
            }
        }
        out.push((ends[0], ends[1]));
    }
    Some(out)
}

fn density_window(problem: &MomentProblem) -> (Vec<f64>, Vec<f64>) {
    (0..problem.ground.len())
        .map(|i| {
            let dom = problem.spec.dom_gamma_star(i);
            (dom.lo.max(-WINDOW), dom.hi.min(WINDOW))
        })
        .unzip()
}

fn objective(problem: &MomentProblem, q: &DVector<f64>) -> f64 {
    let mut total = 0.0;
    for i in 0..q.len() {
        let v = problem.spec.gamma_star(i, q[i]);
        if !v.is_finite() {
            return f64::INFINITY;
        }
        total += v * problem.ground.weight(i);
    }
    total
}

/// Best point on a grid of step at most `h` in every coordinate of `window`
/// (a coordinate of width `w` gets `⌈w/h⌉ + 1` points); ties go to the
/// lexicographically smallest grid index.
fn grid_search(problem: &MomentProblem, par: &Parameterization, window: &[(f64, f64)], h: f64) -> (f64, DVector<f64>) {
    let d = window.len();
    let counts: Vec<usize> = window
        .iter()
        .map(|(l, u)| if u > l { ((u - l) / h - 1e-9).ceil().max(1.0) as usize + 1 } else { 1 })
        .collect();
    let coord = |j: usize, idx: usize| {
        let (l, u) = window[j];
        if counts[j] == 1 {
            0.5 * (l + u)
        } else {
            l + (u - l) * idx as f64 / (counts[j] - 1) as f64
        }
    };
    let mut idx = vec![0usize; d];
    let mut best = (f64::INFINITY, DVector::from_fn(d, |j, _| coord(j, 0)));
    loop {
        let p = DVector::from_fn(d, |j, _| coord(j, idx[j]));
        let q = &par.offset + &par.basis * &p;
        let v = objective(problem, &q);
        if v < best.0 {
            best = (v, p);
        }
        // Odometer increment, last coordinate fastest.
        let mut j = d;
        loop {
            if j == 0 {
                return best;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < counts[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

pub fn brute_force_primal(problem: &MomentProblem, resolution: f64) -> Result<OracleResult> {
    let n = problem.ground.len();
    let k = problem.dim();
    if n > MAX_POINTS || k > MAX_MOMENTS {
        return Err(Error::OracleLimits(format!("N = {n}, K = {k}; at most N = {MAX_POINTS}, K = {MAX_MOMENTS}")));
    }
    if !(resolution > 0.0) {
        return Err(Error::OracleLimits(format!("resolution must be positive, got {resolution}")));
    }
    let par = parameterize(problem)?;
    let (lo, hi) = density_window(problem);
    let d = par.basis.ncols();
    let finish = |p: &DVector<f64>| {
        let q = &par.offset + &par.basis * p;
        let value = objective(problem, &q);
        if value.is_finite() {
            Ok(OracleResult { value, q: Density(q.iter().copied().collect()) })
        } else {
            Err(Error::InfeasibleParameterization("no grid point has finite entropy".into()))
        }
    };
    if d == 0 {
        let q = &par.offset;
        if (0..n).any(|i| q[i] < lo[i] - 1e-12 || q[i] > hi[i] + 1e-12) {
            return Err(Error::InfeasibleParameterization("the constrained density leaves the window".into()));
        }
        return finish(&DVector::zeros(0));
    }
    let bounds = bounding_box(&par, &lo, &hi)
        .ok_or_else(|| Error::InfeasibleParameterization("feasible set misses the window".into()))?;
    let widest = bounds.iter().map(|(l, u)| u - l).fold(0.0f64, f64::max);
    let mut h = widest / (GRID - 1) as f64;
    let mut best = grid_search(problem, &par, &bounds, h);
    // Zoom until the step reaches the resolution, then one ten times finer pass.
    let mut refined = false;
    while !refined {
        refined = h <= resolution;
        let (cells, next_h) = if refined { (1.0, h / 10.0) } else { (ZOOM_CELLS, (2.0 * ZOOM_CELLS * h / (GRID - 1) as f64).max(resolution)) };
        let window: Vec<(f64, f64)> = best
            .1
            .iter()
            .zip(&bounds)
            .map(|(c, b)| ((c - cells * h).max(b.0), (c + cells * h).min(b.1)))
            .collect();
        let next = grid_search(problem, &par, &window, next_h);
        if next.0 <= best.0 {
            best = next;
        }
        h = next_h;
    }
    finish(&best.1)
}
