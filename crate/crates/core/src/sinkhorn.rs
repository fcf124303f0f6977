//! Marginal constraints with the relative entropy, solved by iterative
//! proportional fitting (Sinkhorn scaling).
//!
//! The reference measure is a nonnegative `A × B` kernel `R`. The minimizer
//! has the form `Q̂(a,b) = u_a v_b R(a,b)` where `u = e^f`, `v = e^g` are the
//! exponentiated dual potentials; each half-sweep maximizes the dual exactly
//! in one block.

use serde::{Deserialize, Serialize};

use crate::constraints::{MomentMap, TargetSet};
use crate::dual::{MomentProblem, SolverOptions};
use crate::error::{Error, Result};
use crate::measure::{pairwise_sum, Density, GroundSpace, Point};
use crate::recovery::DualCertificate;
use crate::young::EntropySpec;

/// Relative tolerance on `Σ row_target = Σ col_target`.
const MASS_BALANCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalProblem {
    kernel: Vec<Vec<f64>>,
    row_target: Vec<f64>,
    col_target: Vec<f64>,
}

/// Multiplicative dual potentials `u = e^f`, `v = e^g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl ScalingPair {
    pub fn ones(rows: usize, cols: usize) -> Self {
        ScalingPair { u: vec![1.0; rows], v: vec![1.0; cols] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginalSolution {
    /// Masses `Q̂(a,b) = u_a v_b R(a,b)`.
    pub q_hat: Vec<Vec<f64>>,
    pub scaling: ScalingPair,
    pub sweeps: usize,
    /// Final `max(‖row − row_target‖₁, ‖col − col_target‖₁)`.
    pub marginal_error: f64,
}

impl MarginalProblem {
    pub fn new(kernel: Vec<Vec<f64>>, row_target: Vec<f64>, col_target: Vec<f64>) -> Result<Self> {
        if kernel.is_empty() || kernel[0].is_empty() {
            return Err(Error::InvalidMarginals("kernel must be non-empty".into()));
        }
        let cols = kernel[0].len();
        if let Some(r) = kernel.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, found: r.len() });
        }
        if kernel.iter().flatten().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::InvalidMarginals("kernel entries must be finite and nonnegative".into()));
        }
        if row_target.len() != kernel.len() {
            return Err(Error::LengthMismatch { expected: kernel.len(), found: row_target.len() });
        }
        if col_target.len() != cols {
            return Err(Error::LengthMismatch { expected: cols, found: col_target.len() });
        }
        if row_target.iter().chain(&col_target).any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidMarginals("targets must be finite and nonnegative".into()));
        }
        let (rm, cm) = (pairwise_sum(&row_target), pairwise_sum(&col_target));
        if (rm - cm).abs() > MASS_BALANCE_TOL * rm.abs().max(cm.abs()).max(1.0) {
            return Err(Error::InvalidMarginals(format!("row targets sum to {rm}, column targets to {cm}")));
        }
        for (a, row) in kernel.iter().enumerate() {
            if row_target[a] > 0.0 && row.iter().all(|k| *k == 0.0) {
                return Err(Error::ZeroDenominator { axis: "row", index: a });
            }
        }
        for b in 0..cols {
            if col_target[b] > 0.0 && kernel.iter().all(|r| r[b] == 0.0) {
                return Err(Error::ZeroDenominator { axis: "col", index: b });
            }
        }
        Ok(MarginalProblem { kernel, row_target, col_target })
    }

    pub fn rows(&self) -> usize {
        self.kernel.len()
    }

    pub fn cols(&self) -> usize {
        self.kernel[0].len()
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    pub fn row_target(&self) -> &[f64] {
        &self.row_target
    }

    pub fn col_target(&self) -> &[f64] {
        &self.col_target
    }

    /// `Q(a,b) = u_a v_b R(a,b)`.
    pub fn plan(&self, scaling: &ScalingPair) -> Vec<Vec<f64>> {
        self.kernel
            .iter()
            .zip(&scaling.u)
            .map(|(row, ua)| row.iter().zip(&scaling.v).map(|(k, vb)| ua * vb * k).collect())
            .collect()
    }

    /// Row and column sums of a plan.
    pub fn marginals(&self, plan: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let rows = plan.iter().map(|r| pairwise_sum(r)).collect();
        let cols = (0..self.cols())
            .map(|b| pairwise_sum(&plan.iter().map(|r| r[b]).collect::<Vec<_>>()))
            .collect();
        (rows, cols)
    }

    /// `(‖row − row_target‖₁, ‖col − col_target‖₁)`.
    pub fn marginal_errors(&self, scaling: &ScalingPair) -> (f64, f64) {
        let (r, c) = self.marginals(&self.plan(scaling));
        (l1_dist(&r, &self.row_target), l1_dist(&c, &self.col_target))
    }

    /// Equivalent moment problem: one point per positive kernel cell with
    /// mass `R(a,b)`, indicator moments for every row and all columns but
    /// the last (which is implied by the mass balance).
    pub fn to_moment_problem(&self, options: SolverOptions) -> Result<(MomentProblem, Vec<(usize, usize)>)> {
        let cells: Vec<(usize, usize)> = (0..self.rows())
            .flat_map(|a| (0..self.cols()).map(move |b| (a, b)))
            .filter(|&(a, b)| self.kernel[a][b] > 0.0)
            .collect();
        let points = cells.iter().map(|(a, b)| Point::Label(format!("{a},{b}"))).collect();
        let weights = cells.iter().map(|&(a, b)| self.kernel[a][b]).collect();
        let ground = GroundSpace::new(points, weights)?;
        let mut rows = Vec::new();
        for a in 0..self.rows() {
            rows.push(cells.iter().map(|&(i, _)| if i == a { 1.0 } else { 0.0 }).collect());
        }
        for b in 0..self.cols() - 1 {
            rows.push(cells.iter().map(|&(_, j)| if j == b { 1.0 } else { 0.0 }).collect());
        }
        let mut x = self.row_target.clone();
        x.extend_from_slice(&self.col_target[..self.cols() - 1]);
        let spec = EntropySpec::catalog("boltzmann_special", &ground, None)?;
        let problem = MomentProblem::new(spec, MomentMap::new(rows)?, TargetSet::singleton(x), ground, options)?;
        Ok((problem, cells))
    }
}

fn l1_dist(a: &[f64], b: &[f64]) -> f64 {
    pairwise_sum(&a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>())
}

/// `u′_a = row_target_a / Σ_b R(a,b) v_b`.
pub fn row_update(problem: &MarginalProblem, v: &[f64]) -> Result<Vec<f64>> {
    problem
        .kernel
        .iter()
        .enumerate()
        .map(|(a, row)| {
            let denom = pairwise_sum(&row.iter().zip(v).map(|(k, vb)| k * vb).collect::<Vec<_>>());
            scale(problem.row_target[a], denom, "row", a)
        })
        .collect()
}

/// `v′_b = col_target_b / Σ_a R(a,b) u_a`.
pub fn col_update(problem: &MarginalProblem, u: &[f64]) -> Result<Vec<f64>> {
    (0..problem.cols())
        .map(|b| {
            let terms: Vec<f64> = problem.kernel.iter().zip(u).map(|(r, ua)| r[b] * ua).collect();
            scale(problem.col_target[b], pairwise_sum(&terms), "col", b)
        })
        .collect()
}

fn scale(target: f64, denom: f64, axis: &'static str, index: usize) -> Result<f64> {
    if denom > 0.0 {
        Ok(target / denom)
    } else if target == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::ZeroDenominator { axis, index })
    }
}

/// One full sweep: row update, then column update.
pub fn ipf_step(problem: &MarginalProblem, scaling: &ScalingPair) -> Result<ScalingPair> {
    check_scaling(problem, scaling)?;
    let u = row_update(problem, &scaling.v)?;
    let v = col_update(problem, &u)?;
    Ok(ScalingPair { u, v })
}

fn check_scaling(problem: &MarginalProblem, scaling: &ScalingPair) -> Result<()> {
    if scaling.u.len() != problem.rows() {
        return Err(Error::LengthMismatch { expected: problem.rows(), found: scaling.u.len() });
    }
    if scaling.v.len() != problem.cols() {
        return Err(Error::LengthMismatch { expected: problem.cols(), found: scaling.v.len() });
    }
    if scaling.u.iter().chain(&scaling.v).any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::InvalidMarginals("scalings must be finite and nonnegative".into()));
    }
    Ok(())
}

/// Sweep from `u = v = 1` until both marginal errors are at most `tol`.
pub fn solve_marginals(problem: &MarginalProblem, tol: f64, max_sweeps: usize) -> Result<MarginalSolution> {
    solve_marginals_from(problem, ScalingPair::ones(problem.rows(), problem.cols()), tol, max_sweeps)
}

pub fn solve_marginals_from(
    problem: &MarginalProblem,
    start: ScalingPair,
    tol: f64,
    max_sweeps: usize,
) -> Result<MarginalSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidOption(format!("tol must be positive, got {tol}")));
    }
    check_scaling(problem, &start)?;
    let mut scaling = start;
    let mut error = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        scaling = ipf_step(problem, &scaling)?;
        let (er, ec) = problem.marginal_errors(&scaling);
        error = er.max(ec);
        if error <= tol {
            return Ok(MarginalSolution { q_hat: problem.plan(&scaling), scaling, sweeps: sweep, marginal_error: error });
        }
    }
    Err(Error::NotConverged { sweeps: max_sweeps, error })
}

/// `f = ln u`, `g = ln v`, shifted so that the finite entries of `f` sum to
/// zero. Zero scalings map to `−∞`.
pub fn gauged_potentials(scaling: &ScalingPair) -> (Vec<f64>, Vec<f64>) {
    let mut f: Vec<f64> = scaling.u.iter().map(|u| u.ln()).collect();
    let mut g: Vec<f64> = scaling.v.iter().map(|v| v.ln()).collect();
    let finite: Vec<f64> = f.iter().copied().filter(|x| x.is_finite()).collect();
    if !finite.is_empty() {
        let c = pairwise_sum(&finite) / finite.len() as f64;
        f.iter_mut().for_each(|x| *x -= c);
        g.iter_mut().for_each(|x| *x += c);
    }
    (f, g)
}

/// `t·x` with `0·(±∞) = 0`.
fn weighted(t: f64, x: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t * x
    }
}

/// Dual objective `⟨f, row_target⟩ + ⟨g, col_target⟩ − Σ R(a,b)(u_a v_b − 1)`
/// at `f = ln u`, `g = ln v`.
pub fn marginal_dual_objective(problem: &MarginalProblem, scaling: &ScalingPair) -> f64 {
    let lin: Vec<f64> = scaling
        .u
        .iter()
        .zip(&problem.row_target)
        .chain(scaling.v.iter().zip(&problem.col_target))
        .map(|(s, t)| weighted(*t, s.ln()))
        .collect();
    let mut gamma = Vec::with_capacity(problem.rows() * problem.cols());
    for (row, ua) in problem.kernel.iter().zip(&scaling.u) {
        for (k, vb) in row.iter().zip(&scaling.v) {
            gamma.push(k * (ua * vb - 1.0));
        }
    }
    pairwise_sum(&lin) - pairwise_sum(&gamma)
}

/// Certificate at the scaling pair. `y_hat` is `(f, g)` under the gauge of
/// [`gauged_potentials`], `q_hat` the row-major density `u_a v_b` and
/// `moments` the concatenated row and column marginals.
pub fn marginals_certificate(problem: &MarginalProblem, scaling: &ScalingPair) -> Result<DualCertificate> {
    check_scaling(problem, scaling)?;
    let (f, g) = gauged_potentials(scaling);
    let mut q = Vec::new();
    let mut entropy = Vec::new();
    let mut gamma = Vec::new();
    let mut pairing = Vec::new();
    for (a, row) in problem.kernel.iter().enumerate() {
        for (b, &k) in row.iter().enumerate() {
            let d = scaling.u[a] * scaling.v[b];
            let s = f[a] + g[b];
            q.push(d);
            // γ*(d) = d ln d − d + 1, with γ*(0) = 1.
            entropy.push(k * (weighted(d, d.ln()) - d + 1.0));
            gamma.push(k * (d - 1.0));
            pairing.push(k * weighted(d, s));
        }
    }
    let primal_value = pairwise_sum(&entropy);
    let dual_value = marginal_dual_objective(problem, scaling);
    let young_residual = (primal_value + pairwise_sum(&gamma) - pairwise_sum(&pairing)).abs();
    let (r, c) = problem.marginals(&problem.plan(scaling));
    let sq: Vec<f64> = r
        .iter()
        .zip(&problem.row_target)
        .chain(c.iter().zip(&problem.col_target))
        .map(|(x, t)| (x - t) * (x - t))
        .collect();
    let mut y_hat = f;
    y_hat.extend(g);
    let mut moments = r;
    moments.extend(c);
    Ok(DualCertificate {
        y_hat,
        q_hat: Density(q),
        moments,
        primal_value,
        dual_value,
        gap: primal_value - dual_value,
        young_residual,
        feasibility_residual: pairwise_sum(&sq).sqrt(),
        gamma_star_value: primal_value,
    })
}
