//! Constraint operators and target sets.
//!
//! A moment map `θ = (θ₁, …, θ_K)` sends a density to its moment vector
//! `T q = Σᵢ θ(zᵢ) qᵢ rᵢ`; the adjoint sends a dual vector `y` to the
//! function `zᵢ ↦ ⟨y, θ(zᵢ)⟩`. Marginal maps are the product-space analogue
//! with adjoint `f ⊕ g`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{pairwise_sum, Density, GroundSpace};

/// Relative eigenvalue threshold below which a Gram matrix is degenerate.
pub const GRAM_DEGENERACY: f64 = 1e-12;

/// `K` moment functions tabulated on the `N` ground points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MomentMap {
    rows: Vec<Vec<f64>>,
}

impl MomentMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().map(Vec::len).ok_or_else(|| Error::ShapeMismatch("moment map needs K >= 1 rows".into()))?;
        if n == 0 {
            return Err(Error::ShapeMismatch("moment functions need at least one point".into()));
        }
        if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("row {k} has {} entries, expected {n}", r.len())));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::ShapeMismatch("moment functions must be finite".into()));
        }
        Ok(MomentMap { rows })
    }

    /// Number of moment functions `K`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of ground points `N`.
    pub fn num_points(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn value(&self, k: usize, i: usize) -> f64 {
        self.rows[k][i]
    }

    /// `θ(zᵢ)` as a `K`-vector.
    pub fn at_point(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    /// `⟨y, θ(zᵢ)⟩` for a single point.
    pub fn pair(&self, y: &[f64], i: usize) -> f64 {
        self.rows.iter().zip(y).map(|(r, yk)| yk * r[i]).sum()
    }

    fn check(&self, ground: &GroundSpace) -> Result<()> {
        if self.num_points() != ground.len() {
            return Err(Error::ShapeMismatch(format!(
                "moment map has {} points, ground space has {}",
                self.num_points(),
                ground.len()
            )));
        }
        Ok(())
    }
}

/// `x_k = Σᵢ θ_k(zᵢ) qᵢ rᵢ`.
pub fn apply_t(theta: &MomentMap, q: &Density, ground: &GroundSpace) -> Result<Vec<f64>> {
    theta.check(ground)?;
    if q.len() != ground.len() {
        return Err(Error::ShapeMismatch(format!("density has {} values, ground space has {}", q.len(), ground.len())));
    }
    let masses = q.masses(ground);
    Ok(theta
        .rows
        .iter()
        .map(|row| {
            let terms: Vec<f64> = row.iter().zip(&masses).map(|(t, w)| t * w).collect();
            pairwise_sum(&terms)
        })
        .collect())
}

/// `uᵢ = Σ_k y_k θ_k(zᵢ)`.
pub fn adjoint(theta: &MomentMap, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != theta.dim() {
        return Err(Error::ShapeMismatch(format!("dual vector has {} entries, K = {}", y.len(), theta.dim())));
    }
    Ok((0..theta.num_points()).map(|i| theta.pair(y, i)).collect())
}

/// Closed convex target set in `ℝ^K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSet {
    Singleton(Vec<f64>),
    Box { center: Vec<f64>, radius: Vec<f64> },
}

/// `inf_{x ∈ C} ⟨y, x⟩` with its minimizing witness and the supergradient
/// selection used by the dual gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportValue {
    pub value: f64,
    pub witness: Vec<f64>,
    pub subgradient: Vec<f64>,
}

fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl TargetSet {
    pub fn singleton(x: Vec<f64>) -> Self {
        TargetSet::Singleton(x)
    }

    pub fn boxed(center: Vec<f64>, radius: Vec<f64>) -> Result<Self> {
        let t = TargetSet::Box { center, radius };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TargetSet::Singleton(x) => {
                if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidTarget("singleton must be a nonempty finite vector".into()));
                }
            }
            TargetSet::Box { center, radius } => {
                if center.len() != radius.len() || center.is_empty() {
                    return Err(Error::InvalidTarget(format!(
                        "box center has {} entries, radius has {}",
                        center.len(),
                        radius.len()
                    )));
                }
                if center.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidTarget("box center must be finite".into()));
                }
                if radius.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
                    return Err(Error::InvalidTarget("box radii must be finite and nonnegative".into()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.center().len()
    }

    pub fn center(&self) -> &[f64] {
        match self {
            TargetSet::Singleton(x) => x,
            TargetSet::Box { center, .. } => center,
        }
    }

    /// Componentwise half-widths; zero for a singleton.
    pub fn radii(&self) -> Vec<f64> {
        match self {
            TargetSet::Singleton(x) => vec![0.0; x.len()],
            TargetSet::Box { radius, .. } => radius.clone(),
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self, TargetSet::Singleton(_))
    }

    pub fn lower(&self) -> Vec<f64> {
        self.center().iter().zip(self.radii()).map(|(c, r)| c - r).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.center().iter().zip(self.radii()).map(|(c, r)| c + r).collect()
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.lower().iter().zip(self.upper()).zip(x).map(|((lo, hi), v)| v.clamp(*lo, hi)).collect()
    }

    /// Euclidean distance to the set.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.project(x).iter().zip(x).map(|(p, v)| (p - v) * (p - v)).sum::<f64>().sqrt()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim() && self.distance(x) <= tol
    }
}

/// `inf_{x ∈ C} ⟨y, x⟩` in closed form.
///
/// For a box the witness is `c_k − r_k sign(y_k)` with `sign(0) = 0`.
pub fn support_inf(target: &TargetSet, y: &[f64]) -> SupportValue {
    match target {
        TargetSet::Singleton(x) => {
            let value = x.iter().zip(y).map(|(a, b)| a * b).sum();
            SupportValue { value, witness: x.clone(), subgradient: x.clone() }
        }
        TargetSet::Box { center, radius } => {
            let witness: Vec<f64> = center.iter().zip(radius).zip(y).map(|((c, r), yk)| c - r * sign0(*yk)).collect();
            let value = center.iter().zip(y).map(|(c, yk)| c * yk).sum::<f64>()
                - radius.iter().zip(y).map(|(r, yk)| r * yk.abs()).sum::<f64>();
            SupportValue { value, subgradient: witness.clone(), witness }
        }
    }
}

/// Marginal operator on a product grid `A × B`, points in row-major order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalMap {
    pub rows: usize,
    pub cols: usize,
}

impl MarginalMap {
    pub fn new(rows: usize, cols: usize, ground: &GroundSpace) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != ground.len() {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} grid does not match a ground space of {} points",
                ground.len()
            )));
        }
        Ok(MarginalMap { rows, cols })
    }

    /// `(Q_A, Q_B)` for the measure `Q = q·R`.
    pub fn apply(&self, q: &Density, ground: &GroundSpace) -> Result<(Vec<f64>, Vec<f64>)> {
        if q.len() != self.rows * self.cols || ground.len() != q.len() {
            return Err(Error::ShapeMismatch("density does not match the product grid".into()));
        }
        let masses = q.masses(ground);
        let row: Vec<f64> = (0..self.rows).map(|a| pairwise_sum(&masses[a * self.cols..(a + 1) * self.cols])).collect();
        let col: Vec<f64> = (0..self.cols)
            .map(|b| {
                let column: Vec<f64> = (0..self.rows).map(|a| masses[a * self.cols + b]).collect();
                pairwise_sum(&column)
            })
            .collect();
        Ok((row, col))
    }
}

/// `(f ⊕ g)(a, b) = f(a) + g(b)`, flattened row-major.
pub fn marginal_adjoint(map: &MarginalMap, f: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    if f.len() != map.rows || g.len() != map.cols {
        return Err(Error::ShapeMismatch(format!(
            "potentials have lengths ({}, {}), grid is {}x{}",
            f.len(),
            g.len(),
            map.rows,
            map.cols
        )));
    }
    Ok(f.iter().flat_map(|fa| g.iter().map(move |gb| fa + gb)).collect())
}

/// Gram matrix `G = Σᵢ θ(zᵢ) θ(zᵢ)ᵀ rᵢ` and its smallest eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
}

/// Gram matrix of the moment map, rejecting maps whose adjoint is not
/// injective (`σ_min ≤ 1e-12·trace`).
pub fn gram_matrix(theta: &MomentMap, ground: &GroundSpace) -> Result<GramMatrix> {
    theta.check(ground)?;
    let k = theta.dim();
    let w = ground.weights();
    let matrix = DMatrix::from_fn(k, k, |a, b| {
        let terms: Vec<f64> = (0..ground.len()).map(|i| theta.rows[a][i] * theta.rows[b][i] * w[i]).collect();
        pairwise_sum(&terms)
    });
    let trace = matrix.trace();
    let min_eigenvalue = SymmetricEigen::new(matrix.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = GRAM_DEGENERACY * trace;
    if !(min_eigenvalue > threshold) || matrix.clone().cholesky().is_none() {
        return Err(Error::DegenerateMomentMap { min_eigenvalue, threshold });
    }
    Ok(GramMatrix { matrix, min_eigenvalue })
}
