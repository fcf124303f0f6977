use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn entmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entmin")).args(args).current_dir(problems()).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_exit_codes() {
    for (file, code) in [
        ("quadratic_3pt.json", 0),
        ("boltzmann_2pt.json", 0),
        ("reverse_2pt.json", 0),
        ("box_boltzmann_4pt.json", 0),
        ("variant_3pt.json", 0),
        ("gaussian_201.json", 0),
        ("infeasible_mean2.json", 2),
        ("boundary_mean1.json", 2),
    ] {
        let out = entmin(&["solve", file]);
        assert_eq!(out.status.code(), Some(code), "{file}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = entmin(&["solve", "boltzmann_2pt.json", "--max-iter", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = entmin(&["solve", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn solve_report() {
    let out = entmin(&["solve", "boltzmann_2pt.json"]);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "Converged");
    let y = v["certificate"]["y_hat"].as_array().unwrap();
    assert!((y[0].as_f64().unwrap() - 0.3f64.ln()).abs() < 1e-8);
    assert!(v["certificate"]["gap"].as_f64().unwrap().abs() < 1e-8);

    let out = entmin(&["solve", "quadratic_3pt.json", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("primal_value,dual_value,gap,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn qualify_verdicts_on_stderr() {
    let out = entmin(&["solve", "boundary_mean1.json", "--qualify"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("icor: Boundary"), "{err}");
    assert!(err.contains("feasibility: Feasible"), "{err}");
    assert_eq!(stdout_json(&out)["qualification"]["icor"], "Boundary");

    let out = entmin(&["solve", "infeasible_mean2.json", "--qualify"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("feasibility: Infeasible"), "{err}");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dump_normalized_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = entmin(&["solve", "variant_3pt.json", "--dump-normalized"]);
    assert_eq!(first.status.code(), Some(0));
    let path = dir.path().join("n.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = entmin(&["solve", path.to_str().unwrap(), "--dump-normalized"]);
    assert_eq!(first.stdout, second.stdout);
    let v = stdout_json(&first);
    assert!(v["options"]["gap_tol"].is_number());
    assert_eq!(v["entropy"]["m"].as_array().unwrap().len(), 3);
}

#[test]
fn trace_and_density_csv() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let density = dir.path().join("density.csv");
    let out = entmin(&[
        "solve",
        "boltzmann_2pt.json",
        "--trace",
        trace.to_str().unwrap(),
        "--density",
        density.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let t = std::fs::read_to_string(trace).unwrap();
    assert!(t.starts_with("iteration,objective,grad_norm,step\n"));
    let d = std::fs::read_to_string(density).unwrap();
    let lines: Vec<&str> = d.lines().collect();
    assert_eq!(lines[0], "point,weight,q_hat");
    assert_eq!(lines.len(), 3);
}

#[test]
fn marginals_commands() {
    for file in ["marginals_2x2.json", "marginals_3x3_csv.json"] {
        let out = entmin(&["marginals", file]);
        assert_eq!(out.status.code(), Some(0), "{file}");
        let v = stdout_json(&out);
        assert!(v["marginal_error"].as_f64().unwrap() <= 1e-10, "{v}");
    }
    let out = entmin(&["marginals", "marginals_zero_slice.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_star_and_norm() {
    let out = entmin(&["gamma-star", "boltzmann_2pt.json", "--x", "1,0.7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let expected = 0.3 * 0.3f64.ln() + 0.7 * 0.7f64.ln() + 1.0;
    assert!((v["gamma_star"].as_f64().unwrap() - expected).abs() < 1e-8, "{v}");

    let out = entmin(&["gamma-star", "boltzmann_2pt.json", "--x", "1,2"]);
    assert_eq!(stdout_json(&out)["gamma_star"], "inf");

    let out = entmin(&["norm", "quadratic_3pt.json", "--u", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["norm"].as_f64().unwrap() > 0.0);

    let out = entmin(&["norm", "quadratic_3pt.json", "--u", "1,2,3", "--component", "sideways"]);
    assert_eq!(out.status.code(), Some(1));
}
