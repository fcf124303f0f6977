//! Primal recovery `q̂ = γ′(⟨ŷ, θ⟩)` and optimality certificates.

use serde::Serialize;

use crate::constraints::{apply_t, TargetSet};
use crate::dual::{dual_objective, solve_dual, MomentProblem, SolveStatus, Unboundedness};
use crate::error::{Error, Result};
use crate::measure::{entropy_value, integrate, integrate_extended, Density};

/// Numbers certifying (or refuting) optimality of a dual point and its
/// recovered primal density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualCertificate {
    pub y_hat: Vec<f64>,
    pub q_hat: Density,
    /// `T q̂`.
    pub moments: Vec<f64>,
    /// `I(Q̂)`.
    pub primal_value: f64,
    /// `D(ŷ)`.
    pub dual_value: f64,
    /// `primal_value − dual_value`.
    pub gap: f64,
    /// `|I(Q̂) + ∫γ(⟨ŷ,θ⟩)dR − ∫⟨ŷ,θ⟩ dQ̂|`.
    pub young_residual: f64,
    /// Euclidean distance from `T q̂` to the target set.
    pub feasibility_residual: f64,
    /// `∫γ*∘γ′(⟨ŷ,θ⟩) dR`.
    pub gamma_star_value: f64,
}

impl DualCertificate {
    pub const CSV_HEADER: &'static str =
        "primal_value,dual_value,gap,young_residual,feasibility_residual,gamma_star_value,y_hat";

    /// One CSV row matching [`Self::CSV_HEADER`]; `y_hat` is `;`-separated.
    pub fn to_csv_row(&self) -> String {
        let y: Vec<String> = self.y_hat.iter().map(|v| fmt_f64(*v)).collect();
        format!(
            "{},{},{},{},{},{},{}",
            fmt_f64(self.primal_value),
            fmt_f64(self.dual_value),
            fmt_f64(self.gap),
            fmt_f64(self.young_residual),
            fmt_f64(self.feasibility_residual),
            fmt_f64(self.gamma_star_value),
            y.join(";")
        )
    }
}

/// Shortest round-trip decimal form, `inf`/`-inf`/`nan` for non-finite values.
pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `q̂ᵢ = γ′(zᵢ, ⟨ŷ, θ(zᵢ)⟩)`.
pub fn recover(problem: &MomentProblem, y_hat: &[f64]) -> Result<Density> {
    if y_hat.len() != problem.dim() {
        return Err(Error::ShapeMismatch(format!("dual vector has {} entries, K = {}", y_hat.len(), problem.dim())));
    }
    let s = problem.linear_forms(y_hat);
    let mut q = Vec::with_capacity(s.len());
    for (i, &si) in s.iter().enumerate() {
        let d = problem.spec.gamma_prime(i, si);
        if !problem.spec.dom_gamma(i).interior_contains(si) || !d.is_finite() {
            return Err(Error::DomainViolation { point: i, s: si });
        }
        q.push(d);
    }
    Ok(Density(q))
}

/// Assemble the certificate at `ŷ`.
pub fn certificate(problem: &MomentProblem, y_hat: &[f64]) -> Result<DualCertificate> {
    let q_hat = recover(problem, y_hat)?;
    let s = problem.linear_forms(y_hat);
    let primal_value = entropy_value(&problem.spec, &q_hat, &problem.ground)?;
    let dual_value = dual_objective(problem, y_hat);
    let gamma_integral = integrate_extended(&problem.ground, |i| problem.spec.gamma(i, s[i]));
    let sq: Vec<f64> = s.iter().zip(q_hat.values()).map(|(a, b)| a * b).collect();
    let pairing = integrate(&sq, &problem.ground)?;
    let young_residual = (primal_value + gamma_integral - pairing).abs();
    let moments = apply_t(&problem.theta, &q_hat, &problem.ground)?;
    let feasibility_residual = problem.target.distance(&moments);
    let gamma_star_value = integrate_extended(&problem.ground, |i| {
        problem.spec.gamma_star(i, problem.spec.gamma_prime(i, s[i]))
    });
    Ok(DualCertificate {
        y_hat: y_hat.to_vec(),
        q_hat,
        moments,
        primal_value,
        dual_value,
        gap: primal_value - dual_value,
        young_residual,
        feasibility_residual,
        gamma_star_value,
    })
}

/// `Γ*(x) = inf{I(Q) : T Q = x}`, computed as the optimal value of the dual
/// with target `{x}`. Returns `+∞` when that dual is unbounded above.
///
/// When the dual supremum is finite but not attained (`x` on the relative
/// boundary of `T dom I`), the value approached by the ascent is returned.
pub fn gamma_star_of(problem: &MomentProblem, x: &[f64]) -> Result<f64> {
    let singleton = problem.with_target(TargetSet::singleton(x.to_vec()))?;
    let sol = solve_dual(&singleton)?;
    match sol.status {
        SolveStatus::DualUnbounded(Unboundedness::Value) => Ok(f64::INFINITY),
        _ => Ok(sol.objective),
    }
}
