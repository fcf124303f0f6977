//! Dual ascent for moment-constrained entropy minimization.
//!
//! The dual objective is
//!
//! ```text
//! D(y) = inf_{x ∈ C} ⟨y, x⟩ − Σᵢ γ(zᵢ, ⟨y, θ(zᵢ)⟩) rᵢ
//! ```
//!
//! which is concave, smooth in the integral term and piecewise linear in the
//! support term when `C` is a box. [`solve_dual`] maximizes it with a damped
//! Newton method restricted to the current sign orthant of `y`: coordinates
//! sitting at a kink stay fixed while the minimal-norm supergradient vanishes
//! there, and line searches never cross a kink or leave `dom γ`.
//!
//! Two failure modes of the dual are reported as [`SolveStatus::DualUnbounded`]:
//! the objective itself runs off to `+∞` (the primal is infeasible), or the
//! supremum is finite but not attained, which shows up as the curvature of
//! the integral term collapsing along some free direction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::constraints::{apply_t, gram_matrix, support_inf, MomentMap, TargetSet};
use crate::error::{Error, Result};
use crate::measure::{entropy_value, integrate_extended, pairwise_sum, Density, GroundSpace};
use crate::young::EntropySpec;

const ARMIJO: f64 = 1e-4;
const MAX_SHRINKS: usize = 80;

/// Tuning knobs of [`solve_dual`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Stop once the supergradient norm and the duality gap are both below this.
    pub gap_tol: f64,
    pub max_iter: usize,
    /// Backtracking factor in `(0, 1)`.
    pub ls_shrink: f64,
    /// Fraction of the distance to `∂dom γ` a trial step may cover.
    pub domain_margin: f64,
    /// Starting point; `None` means `y = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init_y: Option<Vec<f64>>,
    /// Relative curvature below which the dual maximizer is declared
    /// unattained.
    pub curvature_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            gap_tol: 1e-9,
            max_iter: 200,
            ls_shrink: 0.5,
            domain_margin: 0.99,
            init_y: None,
            curvature_floor: 1e-7,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self, k: usize) -> Result<()> {
        if !(self.gap_tol > 0.0) {
            return Err(Error::InvalidOption(format!("gap_tol must be positive, got {}", self.gap_tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidOption("max_iter must be at least 1".into()));
        }
        if !(self.ls_shrink > 0.0 && self.ls_shrink < 1.0) {
            return Err(Error::InvalidOption(format!("ls_shrink must lie in (0, 1), got {}", self.ls_shrink)));
        }
        if !(self.domain_margin > 0.0 && self.domain_margin < 1.0) {
            return Err(Error::InvalidOption(format!("domain_margin must lie in (0, 1), got {}", self.domain_margin)));
        }
        if !(self.curvature_floor >= 0.0) {
            return Err(Error::InvalidOption("curvature_floor must be nonnegative".into()));
        }
        if let Some(y) = &self.init_y {
            if y.len() != k {
                return Err(Error::InvalidOption(format!("init_y has {} entries, K = {k}", y.len())));
            }
        }
        Ok(())
    }
}

/// `minimize I(Q) subject to ∫θ dQ ∈ C` on a finite ground space.
#[derive(Clone, Debug)]
pub struct MomentProblem {
    pub spec: EntropySpec,
    pub theta: MomentMap,
    pub target: TargetSet,
    pub ground: GroundSpace,
    pub options: SolverOptions,
    gram: DMatrix<f64>,
}

impl MomentProblem {
    pub fn new(
        spec: EntropySpec,
        theta: MomentMap,
        target: TargetSet,
        ground: GroundSpace,
        options: SolverOptions,
    ) -> Result<Self> {
        if spec.num_points() != ground.len() {
            return Err(Error::ShapeMismatch(format!(
                "entropy defined on {} points, ground space has {}",
                spec.num_points(),
                ground.len()
            )));
        }
        target.validate()?;
        if target.dim() != theta.dim() {
            return Err(Error::ShapeMismatch(format!("target has dimension {}, K = {}", target.dim(), theta.dim())));
        }
        options.validate(theta.dim())?;
        let gram = gram_matrix(&theta, &ground)?.matrix;
        Ok(MomentProblem { spec, theta, target, ground, options, gram })
    }

    /// Same problem with another target set.
    pub fn with_target(&self, target: TargetSet) -> Result<Self> {
        target.validate()?;
        if target.dim() != self.theta.dim() {
            return Err(Error::ShapeMismatch(format!("target has dimension {}, K = {}", target.dim(), self.dim())));
        }
        Ok(MomentProblem { target, ..self.clone() })
    }

    pub fn with_options(&self, options: SolverOptions) -> Result<Self> {
        options.validate(self.dim())?;
        Ok(MomentProblem { options, ..self.clone() })
    }

    /// Number of moment functions `K`.
    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `sᵢ = ⟨y, θ(zᵢ)⟩`.
    pub fn linear_forms(&self, y: &[f64]) -> Vec<f64> {
        (0..self.ground.len()).map(|i| self.theta.pair(y, i)).collect()
    }

    fn check_y(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("dual vector has {} entries, K = {}", y.len(), self.dim())));
        }
        Ok(())
    }

    fn interior_forms(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_y(y)?;
        let s = self.linear_forms(y);
        for (i, &si) in s.iter().enumerate() {
            if !self.spec.in_dual_domain(i, si) {
                return Err(Error::DomainViolation { point: i, s: si });
            }
        }
        Ok(s)
    }
}

/// Dual objective `D(y)`; `−∞` when some `⟨y, θ(zᵢ)⟩` leaves `dom γ`.
pub fn dual_objective(problem: &MomentProblem, y: &[f64]) -> f64 {
    if y.len() != problem.dim() {
        return f64::NAN;
    }
    let s = problem.linear_forms(y);
    let integral = integrate_extended(&problem.ground, |i| problem.spec.gamma(i, s[i]));
    if integral == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    support_inf(&problem.target, y).value - integral
}

/// Supergradient `w(y) − ∫θ γ′(⟨y, θ⟩) dR` with the witness selection of
/// [`support_inf`].
pub fn dual_gradient(problem: &MomentProblem, y: &[f64]) -> Result<Vec<f64>> {
    let s = problem.interior_forms(y)?;
    let q = Density(s.iter().enumerate().map(|(i, &si)| problem.spec.gamma_prime(i, si)).collect());
    let moments = apply_t(&problem.theta, &q, &problem.ground)?;
    let sel = support_inf(&problem.target, y).subgradient;
    Ok(sel.iter().zip(&moments).map(|(a, b)| a - b).collect())
}

/// Hessian of the smooth part, `−Σᵢ θ(zᵢ)θ(zᵢ)ᵀ γ″(zᵢ, ⟨y, θ(zᵢ)⟩) rᵢ`.
pub fn dual_hessian(problem: &MomentProblem, y: &[f64]) -> Result<DMatrix<f64>> {
    let s = problem.interior_forms(y)?;
    let curv: Vec<f64> = s.iter().enumerate().map(|(i, &si)| problem.spec.gamma_second(i, si)).collect();
    Ok(-curvature_matrix(problem, &curv))
}

fn curvature_matrix(problem: &MomentProblem, curv: &[f64]) -> DMatrix<f64> {
    let k = problem.dim();
    let w = problem.ground.weights();
    let th = problem.theta.rows();
    DMatrix::from_fn(k, k, |a, b| {
        let terms: Vec<f64> = (0..w.len()).map(|i| th[a][i] * th[b][i] * curv[i] * w[i]).collect();
        pairwise_sum(&terms)
    })
}

/// Minimal-norm element of the superdifferential of `D` at `y`, together
/// with the sign orthant the ascent stays in (`0` = coordinate held at its
/// kink).
pub fn min_norm_supergradient(problem: &MomentProblem, y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = problem.interior_forms(y)?;
    let q = Density(s.iter().enumerate().map(|(i, &si)| problem.spec.gamma_prime(i, si)).collect());
    let moments = apply_t(&problem.theta, &q, &problem.ground)?;
    Ok(orthant_supergradient(&problem.target, y, &moments))
}

fn orthant_supergradient(target: &TargetSet, y: &[f64], moments: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let c = target.center();
    let r = target.radii();
    let mut p = vec![0.0; y.len()];
    let mut sigma = vec![0.0; y.len()];
    for k in 0..y.len() {
        let a = c[k] - moments[k];
        if y[k] > 0.0 {
            p[k] = a - r[k];
            sigma[k] = 1.0;
        } else if y[k] < 0.0 {
            p[k] = a + r[k];
            sigma[k] = -1.0;
        } else if a - r[k] > 0.0 {
            p[k] = a - r[k];
            sigma[k] = 1.0;
        } else if a + r[k] < 0.0 {
            p[k] = a + r[k];
            sigma[k] = -1.0;
        }
    }
    (p, sigma)
}

/// One accepted iterate of the ascent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub y: Vec<f64>,
    pub objective: f64,
    pub grad_norm: f64,
    pub step: f64,
}

/// Per-iteration history of [`solve_dual`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DualTrace {
    pub records: Vec<TraceRecord>,
}

/// Why the dual has no bounded maximizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unboundedness {
    /// `sup D = +∞`: the target set misses `T dom I`.
    Value,
    /// `sup D < ∞` but is only approached as `‖y‖ → ∞`.
    Maximizer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "kind")]
pub enum SolveStatus {
    Converged,
    DualUnbounded(Unboundedness),
    MaxIterations,
    /// The line search could not make progress before the stopping test held.
    Stalled,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::DualUnbounded(_) => "DualUnbounded",
            SolveStatus::MaxIterations => "MaxIterations",
            SolveStatus::Stalled => "Stalled",
        }
    }
}

/// Output of [`solve_dual`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualSolution {
    pub y_hat: Vec<f64>,
    pub status: SolveStatus,
    pub objective: f64,
    pub grad_norm: f64,
    pub gap: f64,
    pub iterations: usize,
    /// Smallest eigenvalue of the integral-term curvature relative to the Gram
    /// matrix on the free coordinates.
    pub relative_curvature: f64,
    /// Some `⟨ŷ, θ(zᵢ)⟩` lies within `1e-6` of a finite end of `dom γ`.
    pub near_boundary: bool,
    pub trace: DualTrace,
}

struct Eval {
    objective: f64,
    moments: Vec<f64>,
    density: Vec<f64>,
    curvature: Vec<f64>,
}

fn evaluate(problem: &MomentProblem, y: &[f64]) -> Option<Eval> {
    let s = problem.linear_forms(y);
    let n = s.len();
    let mut gamma = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    for (i, &si) in s.iter().enumerate() {
        if !problem.spec.dom_gamma(i).interior_contains(si) {
            return None;
        }
        let g = problem.spec.gamma(i, si);
        let d = problem.spec.gamma_prime(i, si);
        let c = problem.spec.gamma_second(i, si);
        if !(g.is_finite() && d.is_finite()) {
            return None;
        }
        gamma.push(g * problem.ground.weight(i));
        density.push(d);
        curvature.push(if c.is_finite() { c.max(0.0) } else { 0.0 });
    }
    let objective = support_inf(&problem.target, y).value - pairwise_sum(&gamma);
    let moments = apply_t(&problem.theta, &Density(density.clone()), &problem.ground).ok()?;
    Some(Eval { objective, moments, density, curvature })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn free_set(sigma: &[f64]) -> Vec<usize> {
    sigma.iter().enumerate().filter(|(_, s)| **s != 0.0).map(|(k, _)| k).collect()
}

fn submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

/// Smallest generalized eigenvalue of `(A_FF, G_FF)`.
fn relative_curvature(curv: &DMatrix<f64>, gram: &DMatrix<f64>, free: &[usize]) -> f64 {
    if free.is_empty() {
        return f64::INFINITY;
    }
    let a = submatrix(curv, free);
    let g = submatrix(gram, free);
    let Some(chol) = g.cholesky() else {
        return 0.0;
    };
    let l = chol.l();
    let Some(x) = l.solve_lower_triangular(&a) else {
        return 0.0;
    };
    let Some(m) = l.solve_lower_triangular(&x.transpose()) else {
        return 0.0;
    };
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn newton_direction(curv: &DMatrix<f64>, p: &[f64], sigma: &[f64], y: &[f64]) -> Vec<f64> {
    let free = free_set(sigma);
    let mut d = vec![0.0; p.len()];
    if free.is_empty() {
        return d;
    }
    let a = submatrix(curv, &free);
    let rhs = DVector::from_iterator(free.len(), free.iter().map(|&k| p[k]));
    let solved = a.cholesky().map(|c| c.solve(&rhs));
    let mut ok = false;
    if let Some(sol) = solved {
        if sol.iter().all(|v| v.is_finite()) {
            for (j, &k) in free.iter().enumerate() {
                d[k] = sol[j];
            }
            let ascent: f64 = d.iter().zip(p).map(|(a, b)| a * b).sum();
            let consistent = free.iter().all(|&k| y[k] != 0.0 || d[k] * sigma[k] > 0.0);
            ok = ascent > 0.0 && consistent;
        }
    }
    if !ok {
        for &k in &free {
            d[k] = p[k];
        }
    }
    let cap = 1e8 * (1.0 + norm(y));
    let dn = norm(&d);
    if dn > cap {
        d.iter_mut().for_each(|v| *v *= cap / dn);
    }
    d
}

/// Largest `t ≤ 1` keeping `⟨y + t d, θ(zᵢ)⟩` a fraction `margin` of the way
/// to any finite end of `dom γ`.
fn domain_step(problem: &MomentProblem, y: &[f64], d: &[f64], margin: f64) -> f64 {
    let mut t_max = f64::INFINITY;
    for i in 0..problem.ground.len() {
        let dom = problem.spec.dom_gamma(i);
        if dom.is_real_line() {
            continue;
        }
        let s = problem.theta.pair(y, i);
        let ds = problem.theta.pair(d, i);
        if ds > 0.0 && dom.hi.is_finite() {
            t_max = t_max.min((dom.hi - s) / ds);
        } else if ds < 0.0 && dom.lo.is_finite() {
            t_max = t_max.min((dom.lo - s) / ds);
        }
    }
    if t_max.is_finite() {
        (margin * t_max).min(1.0)
    } else {
        1.0
    }
}

fn primal_gap(problem: &MomentProblem, eval: &Eval) -> f64 {
    let q = Density(eval.density.clone());
    match entropy_value(&problem.spec, &q, &problem.ground) {
        Ok(v) => v - eval.objective,
        Err(_) => f64::NAN,
    }
}

fn near_boundary(problem: &MomentProblem, y: &[f64]) -> bool {
    problem.linear_forms(y).iter().enumerate().any(|(i, &s)| {
        let dom = problem.spec.dom_gamma(i);
        (dom.hi.is_finite() && (dom.hi - s).abs() <= 1e-6) || (dom.lo.is_finite() && (s - dom.lo).abs() <= 1e-6)
    })
}

/// Maximize the dual objective by orthant-restricted damped Newton ascent.
pub fn solve_dual(problem: &MomentProblem) -> Result<DualSolution> {
    let opts = &problem.options;
    let k = problem.dim();
    let mut y = opts.init_y.clone().unwrap_or_else(|| vec![0.0; k]);
    problem.interior_forms(&y)?;
    let mut eval = evaluate(problem, &y).ok_or_else(|| {
        let s = problem.linear_forms(&y);
        let point = (0..s.len()).find(|&i| !problem.spec.in_dual_domain(i, s[i])).unwrap_or(0);
        Error::DomainViolation { point, s: s[point] }
    })?;

    let mut trace = DualTrace::default();
    let mut step = 0.0;
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    loop {
        let (p, sigma) = orthant_supergradient(&problem.target, &y, &eval.moments);
        let grad_norm = norm(&p);
        trace.records.push(TraceRecord { iteration: iterations, y: y.clone(), objective: eval.objective, grad_norm, step });

        if eval.objective > 1.0 / opts.gap_tol {
            status = SolveStatus::DualUnbounded(Unboundedness::Value);
            break;
        }
        let gap = primal_gap(problem, &eval);
        if grad_norm <= opts.gap_tol && gap.abs() <= opts.gap_tol {
            status = SolveStatus::Converged;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let curv = curvature_matrix(problem, &eval.curvature);
        let d = newton_direction(&curv, &p, &sigma, &y);
        let mut t = domain_step(problem, &y, &d, opts.domain_margin);

        let mut accepted = None;
        for _ in 0..MAX_SHRINKS {
            let trial: Vec<f64> = y
                .iter()
                .zip(&d)
                .zip(&sigma)
                .map(|((yk, dk), sk)| {
                    let v = yk + t * dk;
                    if *sk != 0.0 && v * sk < 0.0 {
                        0.0
                    } else {
                        v
                    }
                })
                .collect();
            if let Some(next) = evaluate(problem, &trial) {
                let predicted: f64 = p.iter().zip(trial.iter().zip(&y)).map(|(pk, (a, b))| pk * (a - b)).sum();
                let gain = next.objective - eval.objective;
                let sufficient = gain >= ARMIJO * predicted;
                let round_off = gain.abs() <= 1e-13 * (1.0 + eval.objective.abs()) && {
                    let (p_next, _) = orthant_supergradient(&problem.target, &trial, &next.moments);
                    norm(&p_next) < grad_norm
                };
                if sufficient || round_off {
                    accepted = Some((trial, next));
                    break;
                }
            }
            t *= opts.ls_shrink;
        }
        match accepted {
            Some((trial, next)) => {
                y = trial;
                eval = next;
                step = t;
            }
            None => {
                status = SolveStatus::Stalled;
                break;
            }
        }
    }

    let (p, sigma) = orthant_supergradient(&problem.target, &y, &eval.moments);
    let grad_norm = norm(&p);
    let curv = curvature_matrix(problem, &eval.curvature);
    let kappa = relative_curvature(&curv, &problem.gram, &free_set(&sigma));
    if kappa < opts.curvature_floor && !matches!(status, SolveStatus::DualUnbounded(_)) {
        status = if status == SolveStatus::Converged {
            SolveStatus::DualUnbounded(Unboundedness::Maximizer)
        } else {
            SolveStatus::DualUnbounded(Unboundedness::Value)
        };
    }
    let gap = primal_gap(problem, &eval);
    Ok(DualSolution {
        near_boundary: near_boundary(problem, &y),
        y_hat: y,
        status,
        objective: eval.objective,
        grad_norm,
        gap,
        iterations,
        relative_curvature: kappa,
        trace,
    })
}
