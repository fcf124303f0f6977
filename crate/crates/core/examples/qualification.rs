//! Feasibility and interior-qualification verdicts next to what the dual
//! solver does on the same problems.
//!
//! Run with `cargo run --example qualification`.

use entmin::qualification::qualify;
use entmin::{solve_dual, EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

fn main() -> entmin::Result<()> {
    let g = GroundSpace::from_coords(&[0.0, 1.0, 2.0], &[1.0; 3])?;
    let theta = MomentMap::new(vec![vec![1.0; 3], vec![0.0, 1.0, 2.0]])?;
    let cases = [
        ("boltzmann_special", TargetSet::singleton(vec![1.0, 0.5])),
        ("boltzmann_special", TargetSet::singleton(vec![1.0, 2.0])),
        ("boltzmann_special", TargetSet::singleton(vec![1.0, 2.5])),
        ("boltzmann_special", TargetSet::boxed(vec![1.0, 2.2], vec![0.0, 0.3])?),
        ("reverse_relative", TargetSet::singleton(vec![1.0, 1.5])),
        ("reverse_relative", TargetSet::singleton(vec![1.0, 0.0])),
        ("quadratic", TargetSet::singleton(vec![1.0, 3.0])),
    ];
    println!("{:<18} {:<34} {:<11} {:<9} {:>10}  solver", "entropy", "target", "feasible", "icor", "eps*");
    for (name, target) in cases {
        let spec = EntropySpec::catalog(name, &g, None)?;
        let p = MomentProblem::new(spec, theta.clone(), target.clone(), g.clone(), SolverOptions::default())?;
        let q = qualify(&p);
        let feasible = match q.feasibility {
            entmin::qualification::Feasibility::Feasible(_) => "Feasible",
            entmin::qualification::Feasibility::Infeasible => "Infeasible",
            entmin::qualification::Feasibility::Unknown => "Unknown",
        };
        let eps = q.epsilon.map_or("-".to_string(), |e| format!("{e:.3e}"));
        let sol = solve_dual(&p)?;
        println!("{name:<18} {:<34} {feasible:<11} {:<9} {eps:>10}  {:?}", format!("{target:?}"), format!("{:?}", q.icor), sol.status);
    }
    Ok(())
}
