//! The value function Γ*(x) = inf { I(Q) : T Q = x } along a line of
//! moment vectors, computed through singleton duals.
//!
//! Run with `cargo run --example gamma_star`.

use entmin::{gamma_star_of, EntropySpec, GroundSpace, MomentMap, MomentProblem, SolverOptions, TargetSet};

fn main() -> entmin::Result<()> {
    let g = GroundSpace::from_coords(&[0.0, 1.0], &[1.0; 2])?;
    let theta = MomentMap::new(vec![vec![1.0, 1.0], vec![0.0, 1.0]])?;
    println!("{:>6} {:>16} {:>16} {:>16}", "mean", "boltzmann", "reverse", "binary entropy");
    for k in -2..=12 {
        let mean = 0.1 * k as f64;
        print!("{mean:>6.2}");
        for name in ["boltzmann_special", "reverse_relative"] {
            let spec = EntropySpec::catalog(name, &g, None)?;
            let p = MomentProblem::new(spec, theta.clone(), TargetSet::singleton(vec![1.0, 0.5]), g.clone(), SolverOptions::default())?;
            print!(" {:>16.10}", gamma_star_of(&p, &[1.0, mean])?);
        }
        // Closed form for the Boltzmann column on the probability simplex.
        let xlogx = |t: f64| if t > 0.0 { t * t.ln() } else { 0.0 };
        let exact = if (0.0..=1.0).contains(&mean) { xlogx(mean) + xlogx(1.0 - mean) + 1.0 } else { f64::INFINITY };
        println!(" {exact:>16.10}");
    }
    Ok(())
}
