//! Catalog entropies, their conjugates and the derived Young functions.
//!
//! Run with `cargo run --example young_catalog`.

use entmin::young::{conjugate_numeric, delta2_classify, young_family, Catalog, EntropySpec, CONJUGATE_TOL};
use entmin::GroundSpace;

fn main() -> entmin::Result<()> {
    let ground = GroundSpace::counting(1)?;
    let samples: Vec<f64> = (0..60).map(|k| 0.5 * 1.5f64.powi(k)).collect();

    println!("{:<18} {:>10} {:>10} {:>12} {:>12}  delta2", "entropy", "gamma*(2)", "gamma(0.5)", "gamma'(0.5)", "numeric conj");
    for kind in Catalog::ALL {
        let spec = EntropySpec::catalog(kind.as_str(), &ground, None)?;
        let dom = spec.dom_gamma_star(0);
        let numeric = conjugate_numeric(|t| spec.gamma_star(0, t), dom, 0.5, CONJUGATE_TOL)?;
        let verdict = delta2_classify(&young_family(&spec), &samples);
        println!(
            "{:<18} {:>10.6} {:>10.6} {:>12.6} {:>12.6}  {:?}",
            kind.as_str(),
            spec.gamma_star(0, 2.0),
            spec.gamma(0, 0.5),
            spec.gamma_prime(0, 0.5),
            numeric,
            verdict
        );
    }

    // λ(s) = γ(s) − m s and its symmetrizations for the Boltzmann entropy.
    let family = young_family(&EntropySpec::catalog("boltzmann_special", &ground, None)?);
    println!("\n{:>6} {:>12} {:>12} {:>12} {:>12}", "s", "lambda", "diamond", "plus", "minus");
    for s in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        println!(
            "{s:>6.2} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            family.lambda(0, s),
            family.lambda_max(0, s),
            family.lambda_plus(0, s),
            family.lambda_minus(0, s)
        );
    }
    println!("lambda*(0.5) closed form {:.10}, numeric {:.10}", family.lambda_star(0, 0.5), family.lambda_star_numeric(0, 0.5, CONJUGATE_TOL)?);
    Ok(())
}
