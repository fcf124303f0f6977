//! Brute-force primal minimization against the dual solver on small
//! instances of every catalog entropy.
//!
//! Run with `cargo run --release --example oracle_crosscheck`.

use entmin::oracle::brute_force_primal;
use entmin::young::Catalog;
use entmin::{certificate, solve_dual, EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

fn main() -> entmin::Result<()> {
    let z = [0.0, 1.0, 2.0, 3.0];
    let g = GroundSpace::from_coords(&z, &[0.5, 1.0, 1.0, 0.5])?;
    let theta = MomentMap::new(vec![vec![1.0; 4], z.to_vec()])?;
    let targets = [TargetSet::singleton(vec![3.0, 4.0]), TargetSet::boxed(vec![3.0, 3.5], vec![0.2, 0.3])?];
    for kind in Catalog::ALL {
        for target in &targets {
            let spec = EntropySpec::catalog(kind.as_str(), &g, None)?;
            let p = MomentProblem::new(spec, theta.clone(), target.clone(), g.clone(), SolverOptions::default())?;
            let sol = solve_dual(&p)?;
            let cert = certificate(&p, &sol.y_hat)?;
            let oracle = brute_force_primal(&p, 1e-4)?;
            println!(
                "{:<18} {:<9} solver I = {:.9}  oracle I = {:.9}  diff = {:+.2e}  gap = {:+.2e}",
                kind.as_str(),
                if target.is_singleton() { "singleton" } else { "box" },
                cert.primal_value,
                oracle.value,
                oracle.value - cert.primal_value,
                cert.gap
            );
        }
    }
    Ok(())
}
