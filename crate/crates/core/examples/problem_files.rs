//! Load a problem file, print its canonical form, solve it and write the
//! trace and density CSV reports.
//!
//! Run with `cargo run --example problem_files -- [problems/variant_3pt.json]`.

use std::path::PathBuf;

use entmin::io::{write_density_csv, write_trace_csv, ProblemFile};
use entmin::{certificate, solve_dual};

fn main() -> entmin::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems/variant_3pt.json"));
    let file = ProblemFile::read(&path)?;
    let normalized = file.normalized()?;
    println!("{}", normalized.to_json()?);
    assert_eq!(ProblemFile::from_json(&normalized.to_json()?)?, normalized);

    let problem = file.to_problem()?;
    let sol = solve_dual(&problem)?;
    println!("\nstatus {:?}", sol.status);
    let mut out = std::io::stdout();
    write_trace_csv(&mut out, &sol.trace)?;
    let cert = certificate(&problem, &sol.y_hat)?;
    write_density_csv(&mut out, &problem.ground, &cert.q_hat)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    Ok(())
}
