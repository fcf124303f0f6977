//! Command-line front end.
//!
//! Exit codes: 0 converged, 1 input error, 2 infeasible or dual unbounded,
//! 3 iteration budget exhausted or stalled.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dual::{solve_dual, MomentProblem, SolveStatus, Unboundedness};
use crate::error::{Error, Result};
use crate::io::{write_density_csv, write_trace_csv, MarginalsFile, ProblemFile};
use crate::measure::{holder_check, luxemburg_norm, LUXEMBURG_TOL};
use crate::oracle::brute_force_primal;
use crate::qualification::{qualify, Feasibility, Interiority};
use crate::recovery::{certificate, gamma_star_of, DualCertificate};
use crate::sinkhorn::{marginals_certificate, solve_marginals};
use crate::young::{young_family, YoungComponent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "entmin", version, about = "Convex entropy minimization under moment and marginal constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a moment problem and print its certificate.
    Solve {
        file: PathBuf,
        /// Print feasibility and interior verdicts to stderr before solving.
        #[arg(long)]
        qualify: bool,
        /// Cross-check against the brute-force primal at this grid resolution.
        #[arg(long, value_name = "RESOLUTION")]
        oracle: Option<f64>,
        #[arg(long, value_name = "CSV")]
        trace: Option<PathBuf>,
        #[arg(long, value_name = "CSV")]
        density: Option<PathBuf>,
        /// Print the canonical problem file and exit.
        #[arg(long)]
        dump_normalized: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        gap_tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        ls_shrink: Option<f64>,
        #[arg(long)]
        domain_margin: Option<f64>,
        #[arg(long)]
        curvature_floor: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        init_y: Option<Vec<f64>>,
    },
    /// Fit a plan to prescribed row and column marginals.
    Marginals {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_sweeps: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate Γ*(x) = inf { I(Q) : T Q = x }.
    GammaStar {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        x: Vec<f64>,
    },
    /// Luxemburg norm of a function on the ground space of a problem file.
    Norm {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
        /// Also check the Orlicz–Hölder inequality against this function.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Option<Vec<f64>>,
        /// One of diamond, plus, minus.
        #[arg(long, default_value = "diamond")]
        component: String,
    },
}

/// Run with process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve {
            file,
            qualify: want_qualify,
            oracle,
            trace,
            density,
            dump_normalized,
            format,
            gap_tol,
            max_iter,
            ls_shrink,
            domain_margin,
            curvature_floor,
            init_y,
        } => {
            let mut pf = ProblemFile::read(&file)?;
            let mut opts = pf.options.clone().unwrap_or_default();
            if let Some(v) = gap_tol {
                opts.gap_tol = v;
            }
            if let Some(v) = max_iter {
                opts.max_iter = v;
            }
            if let Some(v) = ls_shrink {
                opts.ls_shrink = v;
            }
            if let Some(v) = domain_margin {
                opts.domain_margin = v;
            }
            if let Some(v) = curvature_floor {
                opts.curvature_floor = v;
            }
            if init_y.is_some() {
                opts.init_y = init_y;
            }
            pf.options = Some(opts);
            let problem = pf.to_problem()?;
            if dump_normalized {
                writeln!(out, "{}", ProblemFile::from_problem(&problem)?.to_json()?)?;
                return Ok(EXIT_OK);
            }
            solve_command(&problem, want_qualify, oracle, trace.as_deref(), density.as_deref(), format, out, err)
        }
        Command::Marginals { file, tol, max_sweeps, format } => {
            let mf = MarginalsFile::read(&file)?;
            let base = file.parent().unwrap_or(Path::new("."));
            let problem = match mf.to_problem(base) {
                Ok(p) => p,
                Err(e @ Error::ZeroDenominator { .. }) => {
                    writeln!(out, "{}", json!({ "status": "Infeasible", "error": e.to_string() }))?;
                    return Ok(EXIT_INFEASIBLE);
                }
                Err(e) => return Err(e),
            };
            let tol = tol.or(mf.tol).unwrap_or(MarginalsFile::DEFAULT_TOL);
            let max_sweeps = max_sweeps.or(mf.max_sweeps).unwrap_or(MarginalsFile::DEFAULT_MAX_SWEEPS);
            let sol = match solve_marginals(&problem, tol, max_sweeps) {
                Ok(sol) => sol,
                Err(e @ Error::ZeroDenominator { .. }) => {
                    writeln!(out, "{}", json!({ "status": "Infeasible", "error": e.to_string() }))?;
                    return Ok(EXIT_INFEASIBLE);
                }
                Err(e @ Error::NotConverged { .. }) => {
                    writeln!(out, "{}", json!({ "status": "NotConverged", "error": e.to_string() }))?;
                    return Ok(EXIT_NOT_CONVERGED);
                }
                Err(e) => return Err(e),
            };
            let cert = marginals_certificate(&problem, &sol.scaling)?;
            match format {
                Format::Json => {
                    let report = json!({
                        "status": "Converged",
                        "sweeps": sol.sweeps,
                        "marginal_error": sol.marginal_error,
                        "q_hat": sol.q_hat,
                        "scaling": sol.scaling,
                        "certificate": certificate_json(&cert),
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
                }
                Format::Csv => write_certificate_csv(out, &cert)?,
            }
            Ok(EXIT_OK)
        }
        Command::GammaStar { file, x } => {
            let problem = ProblemFile::read(&file)?.to_problem()?;
            let value = gamma_star_of(&problem, &x)?;
            writeln!(out, "{}", json!({ "x": x, "gamma_star": ext_real(value) }))?;
            Ok(EXIT_OK)
        }
        Command::Norm { file, u, v, component } => {
            let problem = ProblemFile::read(&file)?.to_problem()?;
            let component: YoungComponent = component.parse()?;
            if !matches!(component, YoungComponent::Diamond | YoungComponent::Plus | YoungComponent::Minus) {
                return Err(Error::InvalidOption(format!(
                    "`{component:?}` is not even; use diamond, plus or minus"
                )));
            }
            let family = young_family(&problem.spec);
            let norm = luxemburg_norm(&u, |z, s| family.eval(component, z, s), &problem.ground, LUXEMBURG_TOL)?;
            let mut report = json!({ "component": component, "norm": ext_real(norm) });
            if let Some(v) = v {
                let h = holder_check(&u, &v, &family, &problem.ground)?;
                report["holder"] = serde_json::to_value(h)?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(EXIT_OK)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_command(
    problem: &MomentProblem,
    want_qualify: bool,
    oracle: Option<f64>,
    trace: Option<&Path>,
    density: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let mut infeasible = false;
    let mut qualification = Value::Null;
    if want_qualify {
        let q = qualify(problem);
        writeln!(err, "feasibility: {}", feasibility_label(&q.feasibility))?;
        writeln!(err, "icor: {}", interiority_label(q.icor))?;
        infeasible = q.feasibility == Feasibility::Infeasible;
        qualification = json!({
            "feasibility": feasibility_label(&q.feasibility),
            "icor": interiority_label(q.icor),
            "epsilon": q.epsilon,
        });
    }
    let sol = solve_dual(problem)?;
    if let Some(path) = trace {
        write_trace_csv(File::create(path)?, &sol.trace)?;
    }
    let cert = certificate(problem, &sol.y_hat).ok();
    if let (Some(path), Some(c)) = (density, &cert) {
        write_density_csv(File::create(path)?, &problem.ground, &c.q_hat)?;
    }
    let oracle_report = match oracle {
        Some(res) => {
            let r = brute_force_primal(problem, res)?;
            json!({ "resolution": res, "value": r.value, "q": r.q })
        }
        None => Value::Null,
    };
    match format {
        Format::Json => {
            let unboundedness = match sol.status {
                SolveStatus::DualUnbounded(Unboundedness::Value) => json!("value"),
                SolveStatus::DualUnbounded(Unboundedness::Maximizer) => json!("maximizer"),
                _ => Value::Null,
            };
            let mut report = json!({
                "status": sol.status.label(),
                "unboundedness": unboundedness,
                "iterations": sol.iterations,
                "objective": ext_real(sol.objective),
                "grad_norm": sol.grad_norm,
                "certificate": cert.as_ref().map(certificate_json),
            });
            if want_qualify {
                report["qualification"] = qualification;
            }
            if oracle.is_some() {
                report["oracle"] = oracle_report;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Format::Csv => match &cert {
            Some(c) => write_certificate_csv(out, c)?,
            None => writeln!(out, "{}", DualCertificate::CSV_HEADER)?,
        },
    }
    Ok(match sol.status {
        _ if infeasible => EXIT_INFEASIBLE,
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::DualUnbounded(_) => EXIT_INFEASIBLE,
        SolveStatus::MaxIterations | SolveStatus::Stalled => EXIT_NOT_CONVERGED,
    })
}

fn write_certificate_csv(out: &mut dyn Write, c: &DualCertificate) -> Result<()> {
    writeln!(out, "{}", DualCertificate::CSV_HEADER)?;
    writeln!(out, "{}", c.to_csv_row())?;
    Ok(())
}

/// JSON numbers, with `"inf"`, `"-inf"`, `"nan"` for non-finite values.
fn ext_real(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(crate::recovery::fmt_f64(v))
    }
}

fn certificate_json(c: &DualCertificate) -> Value {
    json!({
        "y_hat": c.y_hat,
        "q_hat": c.q_hat,
        "moments": c.moments,
        "primal_value": ext_real(c.primal_value),
        "dual_value": ext_real(c.dual_value),
        "gap": ext_real(c.gap),
        "young_residual": ext_real(c.young_residual),
        "feasibility_residual": ext_real(c.feasibility_residual),
        "gamma_star_value": ext_real(c.gamma_star_value),
    })
}

fn feasibility_label(f: &Feasibility) -> &'static str {
    match f {
        Feasibility::Feasible(_) => "Feasible",
        Feasibility::Infeasible => "Infeasible",
        Feasibility::Unknown => "Unknown",
    }
}

fn interiority_label(i: Interiority) -> &'static str {
    match i {
        Interiority::Interior => "Interior",
        Interiority::Boundary => "Boundary",
        Interiority::Exterior => "Exterior",
        Interiority::Unknown => "Unknown",
    }
}
