//! Maximum entropy on a grid with prescribed mass, mean and second moment:
//! the discretized standard normal.
//!
//! Run with `cargo run --release --example gaussian_maxent`.

use std::time::Instant;

use entmin::{apply_t, certificate, solve_dual, EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

fn main() -> entmin::Result<()> {
    let h = 0.05;
    let z: Vec<f64> = (0..201).map(|i| -5.0 + h * i as f64).collect();
    let ground = GroundSpace::from_coords(&z, &vec![h; z.len()])?;
    let spec = EntropySpec::catalog("boltzmann_special", &ground, None)?;
    let theta = MomentMap::new(vec![vec![1.0; z.len()], z.clone(), z.iter().map(|x| x * x).collect()])?;
    let problem = MomentProblem::new(spec, theta, TargetSet::singleton(vec![1.0, 0.0, 1.0]), ground, SolverOptions::default())?;

    let start = Instant::now();
    let sol = solve_dual(&problem)?;
    let elapsed = start.elapsed();
    let cert = certificate(&problem, &sol.y_hat)?;
    let moments = apply_t(&problem.theta, &cert.q_hat, &problem.ground)?;

    println!("status {:?} in {} iterations ({elapsed:?})", sol.status, sol.iterations);
    println!("y = {:?}  (standard normal: y0 = -ln sqrt(2 pi) = {:.6}, y2 = -0.5)", sol.y_hat, -(2.0 * std::f64::consts::PI).sqrt().ln());
    println!("moments = {moments:?}");
    println!("gap = {:.2e}, young residual = {:.2e}", cert.gap, cert.young_residual);
    for i in (0..z.len()).step_by(20) {
        let exact = (-0.5 * z[i] * z[i]).exp() / (2.0 * std::f64::consts::PI).sqrt();
        println!("  z = {:+.2}  q = {:.6}  phi = {:.6}", z[i], cert.q_hat.values()[i], exact);
    }
    Ok(())
}
