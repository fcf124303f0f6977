//! Matrix scaling to prescribed marginals with the relative entropy, and the
//! same problem solved as a generic moment problem.
//!
//! Run with `cargo run --example sinkhorn_marginals`.

use entmin::sinkhorn::{ipf_step, marginal_dual_objective, marginals_certificate, solve_marginals, MarginalProblem, ScalingPair};
use entmin::{recover, solve_dual, SolverOptions};

fn main() -> entmin::Result<()> {
    let kernel = vec![vec![1.0, 0.5, 0.25], vec![0.5, 1.0, 0.5], vec![0.25, 0.5, 1.0]];
    let problem = MarginalProblem::new(kernel, vec![0.2, 0.3, 0.5], vec![0.4, 0.4, 0.2])?;

    let mut scaling = ScalingPair::ones(3, 3);
    for sweep in 1..=5 {
        scaling = ipf_step(&problem, &scaling)?;
        let (er, ec) = problem.marginal_errors(&scaling);
        println!("sweep {sweep}: dual = {:.12}  row err = {er:.2e}  col err = {ec:.2e}", marginal_dual_objective(&problem, &scaling));
    }

    let sol = solve_marginals(&problem, 1e-12, 500)?;
    let cert = marginals_certificate(&problem, &sol.scaling)?;
    println!("\nconverged in {} sweeps, gap = {:.2e}, young residual = {:.2e}", sol.sweeps, cert.gap, cert.young_residual);
    for row in &sol.q_hat {
        println!("  {row:.6?}");
    }
    println!("potentials (f, g) with sum f = 0: {:.6?}", cert.y_hat);

    let (moment, cells) = problem.to_moment_problem(SolverOptions::default())?;
    let dual = solve_dual(&moment)?;
    let q = recover(&moment, &dual.y_hat)?;
    let worst = cells
        .iter()
        .zip(q.masses(&moment.ground))
        .map(|(&(a, b), m)| (m - sol.q_hat[a][b]).abs())
        .fold(0.0, f64::max);
    println!("generic dual path: {:?}, max |difference| = {worst:.2e}", dual.status);
    Ok(())
}
