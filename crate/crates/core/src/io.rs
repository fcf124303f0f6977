//! Problem files (JSON) and CSV reports.
//!
//! Moment problem file:
//!
//! ```json
//! {
//!   "entropy": {"name": "boltzmann_special"},
//!   "ground": {"points": [0, 1], "weights": [1, 1]},
//!   "theta": [[1, 1], [0, 1]],
//!   "target": {"singleton": [1, 0.7]},
//!   "options": {"gap_tol": 1e-9}
//! }
//! ```
//!
//! Marginals file: `{"kernel": [[...]] | "kernel.csv", "row_target": [...],
//! "col_target": [...], "tol"?: ..., "max_sweeps"?: ...}`. A string kernel is
//! a path to a headerless CSV matrix, relative to the marginals file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constraints::{MomentMap, TargetSet};
use crate::dual::{DualTrace, MomentProblem, SolverOptions};
use crate::error::{Error, Result};
use crate::measure::{Density, GroundSpace, Point};
use crate::recovery::fmt_f64;
use crate::sinkhorn::MarginalProblem;
use crate::young::{Catalog, EntropySpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundEntry {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub entropy: EntropyEntry,
    pub ground: GroundEntry,
    pub theta: Vec<Vec<f64>>,
    pub target: TargetSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<SolverOptions>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        ProblemFile::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_problem(&self) -> Result<MomentProblem> {
        let ground = GroundSpace::new(self.ground.points.clone(), self.ground.weights.clone())?;
        let spec = EntropySpec::catalog(&self.entropy.name, &ground, self.entropy.m.as_deref())?;
        let theta = MomentMap::new(self.theta.clone())?;
        MomentProblem::new(spec, theta, self.target.clone(), ground, self.options.clone().unwrap_or_default())
    }

    /// Canonical form of a catalog problem: every option spelled out, `m`
    /// present only for `boltzmann_variant`.
    pub fn from_problem(problem: &MomentProblem) -> Result<Self> {
        let kind = problem
            .spec
            .catalog_kind()
            .ok_or_else(|| Error::InvalidOption(format!("entropy `{}` has no file representation", problem.spec.name())))?;
        let m = (kind == Catalog::BoltzmannVariant).then(|| problem.spec.minimizers().to_vec());
        Ok(ProblemFile {
            entropy: EntropyEntry { name: kind.as_str().to_string(), m },
            ground: GroundEntry { points: problem.ground.points().to_vec(), weights: problem.ground.weights().to_vec() },
            theta: problem.theta.rows().to_vec(),
            target: problem.target.clone(),
            options: Some(problem.options.clone()),
        })
    }

    pub fn normalized(&self) -> Result<Self> {
        ProblemFile::from_problem(&self.to_problem()?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelSource {
    Matrix(Vec<Vec<f64>>),
    Csv(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalsFile {
    pub kernel: KernelSource,
    pub row_target: Vec<f64>,
    pub col_target: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_sweeps: Option<usize>,
}

impl MarginalsFile {
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_MAX_SWEEPS: usize = 500;

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// `base` resolves a CSV kernel path.
    pub fn to_problem(&self, base: &Path) -> Result<MarginalProblem> {
        let kernel = match &self.kernel {
            KernelSource::Matrix(k) => k.clone(),
            KernelSource::Csv(p) => read_csv_matrix(&base.join(p))?,
        };
        MarginalProblem::new(kernel, self.row_target.clone(), self.col_target.clone())
    }
}

/// Headerless numeric CSV.
pub fn read_csv_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|e| Error::InvalidMarginals(format!("bad CSV cell `{cell}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_trace_csv<W: Write>(out: W, trace: &DualTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "objective", "grad_norm", "step"])?;
    for r in &trace.records {
        w.write_record([r.iteration.to_string(), fmt_f64(r.objective), fmt_f64(r.grad_norm), fmt_f64(r.step)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_density_csv<W: Write>(out: W, ground: &GroundSpace, q: &Density) -> Result<()> {
    ground.check_len(q.len())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point", "weight", "q_hat"])?;
    for ((p, r), v) in ground.points().iter().zip(ground.weights()).zip(q.values()) {
        let point = match p {
            Point::Coord(c) => fmt_f64(*c),
            Point::Label(s) => s.clone(),
        };
        w.write_record([point, fmt_f64(*r), fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}
