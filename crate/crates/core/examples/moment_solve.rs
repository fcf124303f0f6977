//! Solve moment-constrained entropy problems through the dual and print the
//! optimality certificate.
//!
//! Run with `cargo run --example moment_solve`.

use entmin::{certificate, solve_dual, EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

fn report(label: &str, problem: &MomentProblem) -> entmin::Result<()> {
    let sol = solve_dual(problem)?;
    println!("{label}: {:?} after {} iterations, y = {:?}", sol.status, sol.iterations, sol.y_hat);
    for r in &sol.trace.records {
        println!("  iter {:>2}  D = {:+.12}  |g| = {:.3e}  step = {:.3}", r.iteration, r.objective, r.grad_norm, r.step);
    }
    if let Ok(c) = certificate(problem, &sol.y_hat) {
        println!("  q = {:?}", c.q_hat.values());
        println!(
            "  I = {:.12}  D = {:.12}  gap = {:.2e}  young = {:.2e}  feas = {:.2e}",
            c.primal_value, c.dual_value, c.gap, c.young_residual, c.feasibility_residual
        );
    }
    println!();
    Ok(())
}

fn main() -> entmin::Result<()> {
    // Quadratic entropy, three points, prescribed mean.
    let g = GroundSpace::from_coords(&[-1.0, 0.0, 1.0], &[1.0; 3])?;
    let spec = EntropySpec::catalog("quadratic", &g, None)?;
    let theta = MomentMap::new(vec![vec![-1.0, 0.0, 1.0]])?;
    report("quadratic", &MomentProblem::new(spec, theta, TargetSet::singleton(vec![0.5]), g, SolverOptions::default())?)?;

    // Relative entropy on {0, 1} with normalization and mean 0.7.
    let g = GroundSpace::from_coords(&[0.0, 1.0], &[1.0; 2])?;
    let theta = MomentMap::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]])?;
    for name in ["boltzmann_special", "reverse_relative"] {
        let spec = EntropySpec::catalog(name, &g, None)?;
        let p = MomentProblem::new(spec, theta.clone(), TargetSet::singleton(vec![1.0, 0.7]), g.clone(), SolverOptions::default())?;
        report(name, &p)?;
    }

    // Box target: mass in [0.9, 1.1], mean in [1.8, 2.2] on four points.
    let z = [0.0, 1.0, 2.0, 3.0];
    let g = GroundSpace::from_coords(&z, &[1.0; 4])?;
    let spec = EntropySpec::catalog("boltzmann_special", &g, None)?;
    let theta = MomentMap::new(vec![vec![1.0; 4], z.to_vec()])?;
    let target = TargetSet::boxed(vec![1.0, 2.0], vec![0.1, 0.2])?;
    report("box", &MomentProblem::new(spec, theta, target, g, SolverOptions::default())?)?;

    // A mean outside the support: the dual is unbounded.
    let g = GroundSpace::from_coords(&[0.0, 1.0], &[1.0; 2])?;
    let spec = EntropySpec::catalog("boltzmann_special", &g, None)?;
    let theta = MomentMap::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]])?;
    let p = MomentProblem::new(spec, theta, TargetSet::singleton(vec![1.0, 2.0]), g, SolverOptions::default())?;
    let sol = solve_dual(&p)?;
    println!("mean 2 on {{0, 1}}: {:?}, D = {:.3e}", sol.status, sol.objective);
    Ok(())
}
