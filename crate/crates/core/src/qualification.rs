//! Feasibility `C ∩ T dom I ≠ ∅` and interior qualification
//! `C ∩ icor(T dom I) ≠ ∅` diagnostics.
//!
//! Recognized domain shapes for `γ*`:
//! - the real line: `T dom I` is the range of `T`, all of `ℝᴷ` for a
//!   nondegenerate moment map;
//! - `[0, ∞)`: `T dom I` is the closed cone generated by the `θ(zᵢ)`;
//! - `(0, ∞)`: `T dom I` is the relative interior of that cone.
//!
//! Both cone cases reduce to one LP in the point masses `wᵢ = qᵢ rᵢ`:
//! maximize `ε ≤ 1` subject to `Σ wᵢ θ(zᵢ) ∈ C` and `wᵢ ≥ ε`.

use nalgebra::DVector;
use serde::Serialize;

use crate::constraints::TargetSet;
use crate::dual::MomentProblem;
use crate::lp::{Lp, LpOutcome, Method};
use crate::measure::Density;

/// `ε*` above this is a strictly positive interior witness.
pub const ICOR_EPS: f64 = 1e-9;

/// Largest ground space handled by exhaustive enumeration.
pub const ENUMERATION_MAX_POINTS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum Feasibility {
    Feasible(Density),
    Infeasible,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Interiority {
    Interior,
    Boundary,
    /// `C` misses `T dom I` altogether.
    Exterior,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QualificationReport {
    pub feasibility: Feasibility,
    pub icor: Interiority,
    /// Optimal `ε*` of the cone LP, when one was solved.
    pub epsilon: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Linear,
    ClosedCone,
    OpenCone,
}

fn shape(problem: &MomentProblem) -> Option<Shape> {
    let n = problem.ground.len();
    let doms: Vec<_> = (0..n).map(|i| problem.spec.dom_gamma_star(i)).collect();
    let first = doms[0];
    if doms.iter().any(|d| *d != first) {
        return None;
    }
    if first.is_real_line() {
        Some(Shape::Linear)
    } else if first.lo == 0.0 && first.hi == f64::INFINITY {
        Some(if first.lo_closed { Shape::ClosedCone } else { Shape::OpenCone })
    } else {
        None
    }
}

/// Outcome of the cone LP: `None` when no `w` (of any sign) reaches `C`.
struct ConeSolution {
    epsilon: f64,
    masses: Vec<f64>,
}

fn cone_lp(problem: &MomentProblem) -> Option<ConeSolution> {
    let n = problem.ground.len();
    let k = problem.dim();
    let theta = &problem.theta;
    // Columns: v (n), ε⁺, ε⁻, cap slack, then one slack per box inequality.
    let row_sums: Vec<f64> = (0..k).map(|r| (0..n).map(|i| theta.value(r, i)).sum()).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut slack_rows: Vec<(usize, f64)> = Vec::new();
    let (lo, hi) = (problem.target.lower(), problem.target.upper());
    for r in 0..k {
        let base: Vec<f64> = (0..n).map(|i| theta.value(r, i)).chain([row_sums[r], -row_sums[r], 0.0]).collect();
        if lo[r] == hi[r] {
            a.push(base);
            b.push(lo[r]);
            slack_rows.push((a.len() - 1, 0.0));
        } else {
            a.push(base.clone());
            b.push(lo[r]);
            slack_rows.push((a.len() - 1, -1.0));
            a.push(base);
            b.push(hi[r]);
            slack_rows.push((a.len() - 1, 1.0));
        }
    }
    let mut cap = vec![0.0; n];
    cap.extend([1.0, -1.0, 1.0]);
    a.push(cap);
    b.push(1.0);
    slack_rows.push((a.len() - 1, 0.0));
    let extra: Vec<(usize, f64)> = slack_rows.into_iter().filter(|(_, s)| *s != 0.0).collect();
    for row in a.iter_mut() {
        row.extend(std::iter::repeat_n(0.0, extra.len()));
    }
    for (col, (row, s)) in extra.iter().enumerate() {
        a[*row][n + 3 + col] = *s;
    }
    let mut c = vec![0.0; n + 3 + extra.len()];
    c[n] = 1.0;
    c[n + 1] = -1.0;
    let lp = Lp { c, a, b };
    let method = if n <= ENUMERATION_MAX_POINTS { Method::Auto } else { Method::Simplex };
    match lp.solve(method) {
        LpOutcome::Optimal { x, value } => {
            let masses = x[..n].iter().map(|v| v + value).collect();
            Some(ConeSolution { epsilon: value, masses })
        }
        LpOutcome::Infeasible | LpOutcome::Unbounded => None,
    }
}

/// Least-`L²(R)`-norm density with `T q = x`: `q = ⟨G⁻¹x, θ⟩`.
fn least_norm(problem: &MomentProblem, x: &[f64]) -> Option<Density> {
    let g = problem.gram().clone();
    let lambda = g.cholesky()?.solve(&DVector::from_column_slice(x));
    Some(Density(problem.linear_forms(lambda.as_slice())))
}

fn witness_density(problem: &MomentProblem, masses: &[f64]) -> Density {
    Density(masses.iter().zip(problem.ground.weights()).map(|(w, r)| w.max(0.0) / r).collect())
}

pub fn feasibility_check(problem: &MomentProblem) -> Feasibility {
    qualify(problem).feasibility
}

pub fn icor_check(problem: &MomentProblem) -> Interiority {
    qualify(problem).icor
}

/// Both verdicts from a single LP solve.
pub fn qualify(problem: &MomentProblem) -> QualificationReport {
    let unknown = QualificationReport { feasibility: Feasibility::Unknown, icor: Interiority::Unknown, epsilon: None };
    let Some(shape) = shape(problem) else { return unknown };
    if shape == Shape::Linear {
        let x = match &problem.target {
            TargetSet::Singleton(x) => x.clone(),
            b => b.center().to_vec(),
        };
        return match least_norm(problem, &x) {
            Some(q) => QualificationReport { feasibility: Feasibility::Feasible(q), icor: Interiority::Interior, epsilon: None },
            None => unknown,
        };
    }
    let Some(sol) = cone_lp(problem) else {
        return QualificationReport { feasibility: Feasibility::Infeasible, icor: Interiority::Exterior, epsilon: None };
    };
    let eps = sol.epsilon;
    let icor = if eps > ICOR_EPS {
        Interiority::Interior
    } else if eps >= -ICOR_EPS {
        Interiority::Boundary
    } else {
        Interiority::Exterior
    };
    let feasible = match shape {
        Shape::ClosedCone => eps >= -ICOR_EPS,
        _ => eps > ICOR_EPS,
    };
    let feasibility = if feasible {
        Feasibility::Feasible(witness_density(problem, &sol.masses))
    } else {
        Feasibility::Infeasible
    };
    QualificationReport { feasibility, icor, epsilon: Some(eps) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{apply_t, MomentMap};
    use crate::dual::SolverOptions;
    use crate::measure::{entropy_value, GroundSpace};
    use crate::young::{EntropySpec, Interval};

    fn two_point(name: &str, target: TargetSet) -> MomentProblem {
        let g = GroundSpace::from_coords(&[0.0, 1.0], &[1.0; 2]).unwrap();
        let spec = EntropySpec::catalog(name, &g, None).unwrap();
        let theta = MomentMap::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        MomentProblem::new(spec, theta, target, g, SolverOptions::default()).unwrap()
    }

    #[test]
    fn boltzmann_verdicts() {
        let p = two_point("boltzmann_special", TargetSet::singleton(vec![1.0, 0.7]));
        let r = qualify(&p);
        match &r.feasibility {
            Feasibility::Feasible(q) => {
                assert!((q.values()[0] - 0.3).abs() < 1e-12 && (q.values()[1] - 0.7).abs() < 1e-12);
                assert!(entropy_value(&p.spec, q, &p.ground).unwrap().is_finite());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(r.icor, Interiority::Interior);

        let b = p.with_target(TargetSet::singleton(vec![1.0, 1.0])).unwrap();
        assert_eq!(icor_check(&b), Interiority::Boundary);
        assert!(matches!(feasibility_check(&b), Feasibility::Feasible(_)));

        let out = p.with_target(TargetSet::singleton(vec![1.0, 2.0])).unwrap();
        assert_eq!(feasibility_check(&out), Feasibility::Infeasible);
        assert_eq!(icor_check(&out), Interiority::Exterior);
    }

    #[test]
    fn reverse_relative_boundary_is_infeasible() {
        let p = two_point("reverse_relative", TargetSet::singleton(vec![1.0, 1.0]));
        assert_eq!(feasibility_check(&p), Feasibility::Infeasible);
        assert_eq!(icor_check(&p), Interiority::Boundary);
    }

    #[test]
    fn box_touching_hull_interior() {
        // Mean box [0.9, 1.5] reaches inside [0, 1].
        let t = TargetSet::boxed(vec![1.0, 1.2], vec![0.0, 0.3]).unwrap();
        let p = two_point("boltzmann_special", t);
        let r = qualify(&p);
        assert_eq!(r.icor, Interiority::Interior);
        let Feasibility::Feasible(q) = r.feasibility else { panic!() };
        let x = apply_t(&p.theta, &q, &p.ground).unwrap();
        assert!(p.target.contains(&x, 1e-12), "{x:?}");
    }

    #[test]
    fn quadratic_always_interior() {
        let g = GroundSpace::from_coords(&[-1.0, 0.0, 1.0], &[1.0; 3]).unwrap();
        let spec = EntropySpec::catalog("quadratic", &g, None).unwrap();
        let theta = MomentMap::new(vec![vec![-1.0, 0.0, 1.0]]).unwrap();
        let p = MomentProblem::new(spec, theta, TargetSet::singleton(vec![0.5]), g, SolverOptions::default()).unwrap();
        let r = qualify(&p);
        assert_eq!(r.icor, Interiority::Interior);
        let Feasibility::Feasible(q) = r.feasibility else { panic!() };
        for (a, b) in q.values().iter().zip([-0.25, 0.0, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn unrecognized_domain() {
        let g = GroundSpace::counting(2).unwrap();
        let spec = EntropySpec::custom("box", |t| (t - 0.5) * (t - 0.5), Interval::new(0.0, 2.0, true, true), 2).unwrap();
        let theta = MomentMap::new(vec![vec![1.0, 1.0]]).unwrap();
        let p = MomentProblem::new(spec, theta, TargetSet::singleton(vec![1.0]), g, SolverOptions::default()).unwrap();
        assert_eq!(qualify(&p).icor, Interiority::Unknown);
        assert_eq!(feasibility_check(&p), Feasibility::Unknown);
    }

    #[test]
    fn larger_ground_uses_simplex() {
        let n = 20;
        let z: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let g = GroundSpace::from_coords(&z, &vec![1.0; n]).unwrap();
        let spec = EntropySpec::catalog("boltzmann_special", &g, None).unwrap();
        let theta = MomentMap::new(vec![vec![1.0; n], z.clone()]).unwrap();
        let p = MomentProblem::new(spec, theta, TargetSet::singleton(vec![1.0, 0.5]), g, SolverOptions::default()).unwrap();
        assert_eq!(icor_check(&p), Interiority::Interior);
        assert_eq!(icor_check(&p.with_target(TargetSet::singleton(vec![1.0, 0.0])).unwrap()), Interiority::Boundary);
    }
}
