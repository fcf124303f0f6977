//! Luxemburg norms generated by the Young functions of an entropy, and the
//! Orlicz–Hölder inequality between a function and a dual function.
//!
//! Run with `cargo run --example luxemburg_norms`.

use entmin::measure::{holder_check, luxemburg_norm, LUXEMBURG_TOL};
use entmin::young::YoungComponent;
use entmin::{young_family, EntropySpec, GroundSpace};

fn main() -> entmin::Result<()> {
    let z: Vec<f64> = (0..11).map(|i| -1.0 + 0.2 * i as f64).collect();
    let ground = GroundSpace::from_coords(&z, &vec![0.1; z.len()])?;
    let u: Vec<f64> = z.iter().map(|x| 3.0 * x).collect();
    let v: Vec<f64> = z.iter().map(|x| x * x).collect();

    for name in ["boltzmann_special", "reverse_relative", "quadratic"] {
        let family = young_family(&EntropySpec::catalog(name, &ground, None)?);
        print!("{name:<18}");
        for c in [YoungComponent::Diamond, YoungComponent::Plus, YoungComponent::Minus] {
            let n = luxemburg_norm(&u, |i, s| family.eval(c, i, s), &ground, LUXEMBURG_TOL)?;
            print!("  {c:?} {n:.8}");
        }
        let h = holder_check(&u, &v, &family, &ground)?;
        println!("\n{:<18}  |<u,v>| = {:.6} <= 2 |u| |v|* = {:.6}: {}", "", h.pairing.abs(), h.bound, h.holds);
    }

    // Homogeneity: ‖2u‖ = 2‖u‖.
    let family = young_family(&EntropySpec::catalog("boltzmann_special", &ground, None)?);
    let rho = |i: usize, s: f64| family.lambda_max(i, s);
    let n1 = luxemburg_norm(&u, rho, &ground, LUXEMBURG_TOL)?;
    let u2: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
    let n2 = luxemburg_norm(&u2, rho, &ground, LUXEMBURG_TOL)?;
    println!("\nhomogeneity: |2u| - 2|u| = {:.3e}", n2 - 2.0 * n1);
    Ok(())
}
