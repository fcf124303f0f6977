//! Finite weighted ground spaces, integration, entropy values and Luxemburg
//! norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::young::{EntropySpec, YoungFamily};

/// Default relative accuracy of [`luxemburg_norm`].
pub const LUXEMBURG_TOL: f64 = 1e-12;

/// Slack allowed on `ρ(0) = 0` and `ρ ≥ 0` for numerically conjugated `ρ`.
const YOUNG_ZERO_TOL: f64 = 1e-12;

/// A ground point: either a real coordinate or an opaque label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coord(f64),
    Label(String),
}

/// Finite ground space with strictly positive reference masses.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundSpace {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl GroundSpace {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGround("at least one point is required".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: points.len(), found: weights.len() });
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGround(format!("weight {i} must be finite and strictly positive, got {w}")));
        }
        Ok(GroundSpace { points, weights })
    }

    pub fn from_coords(coords: &[f64], weights: &[f64]) -> Result<Self> {
        GroundSpace::new(coords.iter().map(|&c| Point::Coord(c)).collect(), weights.to_vec())
    }

    /// `n` points `0, 1, …, n−1` with unit mass.
    pub fn counting(n: usize) -> Result<Self> {
        let coords: Vec<f64> = (0..n).map(|i| i as f64).collect();
        GroundSpace::from_coords(&coords, &vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Coordinates, when every point is numeric.
    pub fn coords(&self) -> Option<Vec<f64>> {
        self.points
            .iter()
            .map(|p| match p {
                Point::Coord(c) => Some(*c),
                Point::Label(_) => None,
            })
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: n });
        }
        Ok(())
    }
}

/// A density `dQ/dR`, one value per ground point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Density(pub Vec<f64>);

impl Density {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Point masses `qᵢ rᵢ`.
    pub fn masses(&self, ground: &GroundSpace) -> Vec<f64> {
        self.0.iter().zip(ground.weights()).map(|(q, r)| q * r).collect()
    }
}

impl From<Vec<f64>> for Density {
    fn from(v: Vec<f64>) -> Self {
        Density(v)
    }
}

/// Pairwise summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// `Σᵢ uᵢ rᵢ`.
pub fn integrate(u: &[f64], ground: &GroundSpace) -> Result<f64> {
    ground.check_len(u.len())?;
    let terms: Vec<f64> = u.iter().zip(ground.weights()).map(|(u, r)| u * r).collect();
    Ok(pairwise_sum(&terms))
}

/// `Σᵢ f(i) rᵢ` with the extended-real conventions used for entropies: a
/// `+∞` term gives `+∞`, and no NaN is produced from `0·∞` since weights are
/// strictly positive.
pub(crate) fn integrate_extended(ground: &GroundSpace, f: impl Fn(usize) -> f64) -> f64 {
    let mut terms = Vec::with_capacity(ground.len());
    for (i, &r) in ground.weights().iter().enumerate() {
        let v = f(i);
        if v == f64::INFINITY {
            return f64::INFINITY;
        }
        terms.push(v * r);
    }
    pairwise_sum(&terms)
}

/// Entropy `I(Q) = Σᵢ γ*(zᵢ, qᵢ) rᵢ ∈ [0, +∞]`.
pub fn entropy_value(spec: &EntropySpec, q: &Density, ground: &GroundSpace) -> Result<f64> {
    ground.check_len(q.len())?;
    if spec.num_points() != ground.len() {
        return Err(Error::LengthMismatch { expected: ground.len(), found: spec.num_points() });
    }
    Ok(integrate_extended(ground, |i| spec.gamma_star(i, q.0[i])))
}

/// Luxemburg norm `inf{β > 0 : Σ ρ(zᵢ, uᵢ/β) rᵢ ≤ 1}`, by bisection to
/// relative accuracy `tol`. The returned `β` always satisfies the unit-ball
/// inequality.
pub fn luxemburg_norm<F>(u: &[f64], rho: F, ground: &GroundSpace, tol: f64) -> Result<f64>
where
    F: Fn(usize, f64) -> f64,
{
    ground.check_len(u.len())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidOption(format!("Luxemburg tolerance must be positive, got {tol}")));
    }
    for i in 0..u.len() {
        let at_zero = rho(i, 0.0);
        if !(at_zero.abs() <= YOUNG_ZERO_TOL) {
            return Err(Error::NotAYoungFunction(format!("rho(z_{i}, 0) = {at_zero}")));
        }
    }
    if u.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }

    let integral = |beta: f64| -> Result<f64> {
        let mut terms = Vec::with_capacity(u.len());
        for (i, (&ui, &ri)) in u.iter().zip(ground.weights()).enumerate() {
            let v = if ui == 0.0 { 0.0 } else { rho(i, ui / beta) };
            if v < -YOUNG_ZERO_TOL || v.is_nan() {
                return Err(Error::NotAYoungFunction(format!("rho(z_{i}, {}) = {v}", ui / beta)));
            }
            if v == f64::INFINITY {
                return Ok(f64::INFINITY);
            }
            terms.push(v.max(0.0) * ri);
        }
        Ok(pairwise_sum(&terms))
    };

    let (mut lo, mut hi);
    if integral(1.0)? <= 1.0 {
        hi = 1.0;
        lo = 0.5;
        while integral(lo)? <= 1.0 {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return Ok(0.0);
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while integral(hi)? > 1.0 {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() || hi > f64::MAX / 2.0 {
                return Err(Error::NormOverflow(lo));
            }
        }
    }
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if integral(mid)? <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Both sides of the Orlicz–Hölder inequality
/// `|Σ uᵢ vᵢ rᵢ| ≤ 2 ‖u‖_ρ ‖v‖_ρ*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolderReport {
    pub pairing: f64,
    pub norm_u: f64,
    pub norm_v: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Hölder check for an explicit pair `(ρ, ρ*)` of conjugate Young functions.
pub fn holder_check_with<F, G>(u: &[f64], v: &[f64], rho: F, rho_conj: G, ground: &GroundSpace) -> Result<HolderReport>
where
    F: Fn(usize, f64) -> f64,
    G: Fn(usize, f64) -> f64,
{
    ground.check_len(v.len())?;
    let pairing = {
        let uv: Vec<f64> = u.iter().zip(v).map(|(a, b)| a * b).collect();
        integrate(&uv, ground)?.abs()
    };
    let norm_u = luxemburg_norm(u, rho, ground, LUXEMBURG_TOL)?;
    let norm_v = luxemburg_norm(v, rho_conj, ground, LUXEMBURG_TOL)?;
    let bound = 2.0 * norm_u * norm_v;
    Ok(HolderReport { pairing, norm_u, norm_v, bound, holds: pairing <= bound * (1.0 + 1e-12) })
}

/// Hölder check with `ρ = λ⋄` and its conjugate computed numerically.
pub fn holder_check(u: &[f64], v: &[f64], family: &YoungFamily, ground: &GroundSpace) -> Result<HolderReport> {
    holder_check_with(
        u,
        v,
        |z, s| family.lambda_max(z, s),
        |z, t| family.lambda_max_conjugate(z, t, crate::young::CONJUGATE_TOL).unwrap_or(f64::INFINITY),
        ground,
    )
}
