//! Entropy integrands and their Young functions.
//!
//! An entropy is described by a convex integrand `γ*(z, t) ≥ 0` that vanishes
//! exactly at `t = m(z)`. Its convex conjugate `γ(z, s)` drives the dual
//! problem, and the shifted function
//!
//! ```text
//! λ(z, s) = γ(z, s) − m(z)·s
//! ```
//!
//! generates the Orlicz spaces in which the constraint functions live:
//! `λ⋄(z, s) = max(λ(z, s), λ(z, −s))` is an even Young function and
//! `λ±(z, s) = λ(z, ±|s|)` are its one-sided halves.
//!
//! Four integrands are available in closed form (see [`Catalog`]). Any other
//! strictly convex, normalized integrand can be supplied as a closure; its
//! conjugate and derivative are then obtained with [`conjugate_numeric`].
//!
//! Ground points are addressed by index, so "a function of z" is an array over
//! the points of a [`GroundSpace`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::GroundSpace;

/// Default absolute accuracy of numeric conjugation.
pub const CONJUGATE_TOL: f64 = 1e-10;
/// Iteration cap for bracketing and for golden-section refinement.
pub const CONJUGATE_MAX_ITER: usize = 200;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// An interval of the real line with open or closed ends. Infinite ends are
/// always open.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_closed: false,
        hi_closed: false,
    };

    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    /// `[lo, +∞)` or `(lo, +∞)`.
    pub fn from_lower(lo: f64, closed: bool) -> Self {
        Interval::new(lo, f64::INFINITY, closed, false)
    }

    /// `(−∞, hi)` or `(−∞, hi]`.
    pub fn to_upper(hi: f64, closed: bool) -> Self {
        Interval::new(f64::NEG_INFINITY, hi, false, closed)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = x > self.lo || (self.lo_closed && x == self.lo);
        let below = x < self.hi || (self.hi_closed && x == self.hi);
        above && below
    }

    pub fn interior_contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    /// Mirror image `{−x : x ∈ self}`.
    pub fn reflect(&self) -> Self {
        Interval::new(-self.hi, -self.lo, self.hi_closed, self.lo_closed)
    }

    pub fn intersect(&self, other: &Interval) -> Self {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }
}

/// Result of a numeric conjugation: the supremum and, when it is attained at
/// a finite point, the maximizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugatePoint {
    pub value: f64,
    pub argmax: Option<f64>,
}

/// `sup_s { s·t − f(s) }` for a convex `f` that is finite on the interior of
/// `domain`. See [`conjugate_with_argmax`].
pub fn conjugate_numeric<F>(f: F, domain: Interval, t: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    conjugate_with_argmax(f, domain, t, tol).map(|c| c.value)
}

/// Numeric Legendre–Fenchel conjugate at a single slope `t`.
///
/// The concave map `h(s) = s·t − f(s)` is bracketed by expanding geometric
/// steps from a finite starting point, then maximized by golden-section
/// search. Returns `+∞` when the slopes of `h` along the expansion stop
/// decaying far from the start, and a limit value with `argmax = None` when
/// the supremum is only approached asymptotically.
pub fn conjugate_with_argmax<F>(f: F, domain: Interval, t: f64, tol: f64) -> Result<ConjugatePoint>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidOption(format!("conjugation tolerance must be positive, got {tol}")));
    }
    let h = |s: f64| {
        let fs = f(s);
        if fs.is_nan() || fs == f64::INFINITY || !domain.contains(s) {
            f64::NEG_INFINITY
        } else {
            s * t - fs
        }
    };

    let s0 = start_point(&domain);
    let h0 = h(s0);
    if !h0.is_finite() {
        return Err(Error::BracketFailure { t });
    }
    let scale = 1.0 + s0.abs();
    let delta = 1e-3 * scale;

    let right = clamp_toward(&domain, s0, s0 + delta);
    let left = clamp_toward(&domain, s0, s0 - delta);
    let (hr, hl) = (h(right), h(left));

    let dir = if hr > h0 {
        1.0
    } else if hl > h0 {
        -1.0
    } else {
        return Ok(golden_max(&h, &domain, left, right));
    };

    let edge = if dir > 0.0 { domain.hi } else { domain.lo };
    let edge_closed = if dir > 0.0 { domain.hi_closed } else { domain.lo_closed };

    let mut prev = s0;
    let mut cur = if dir > 0.0 { right } else { left };
    let mut h_cur = if dir > 0.0 { hr } else { hl };
    let mut step = delta;
    let mut prev_slope = (h_cur - h0) / (cur - prev).abs();
    let mut persistent = 0usize;

    for _ in 0..CONJUGATE_MAX_ITER {
        step *= 2.0;
        let mut next = cur + dir * step;
        let crossed = if dir > 0.0 { next >= edge } else { next <= edge };
        if crossed {
            next = if edge_closed { edge } else { cur + 0.5 * (edge - cur) };
        }
        if next == cur {
            // Pinned against an open edge at machine resolution.
            return Ok(ConjugatePoint { value: h_cur, argmax: None });
        }
        let h_next = h(next);

        if !(h_next >= h_cur) {
            let (a, b) = if dir > 0.0 { (prev, next) } else { (next, prev) };
            return Ok(golden_max(&h, &domain, a, b));
        }
        if crossed && edge_closed {
            let (a, b) = if dir > 0.0 { (cur, next) } else { (next, cur) };
            return Ok(golden_max(&h, &domain, a, b));
        }

        let gain = h_next - h_cur;
        let slope = gain / (next - cur).abs();
        let far = (next - s0).abs() > 1e3 * scale;

        if edge.is_infinite() && far && slope > 0.0 && slope >= 0.9 * prev_slope {
            persistent += 1;
            if persistent >= 3 || h_next > 1e300 {
                return Ok(ConjugatePoint { value: f64::INFINITY, argmax: None });
            }
        } else {
            persistent = 0;
        }
        if gain <= tol * 0.1 && slope <= 0.5 * prev_slope {
            return Ok(ConjugatePoint { value: h_next, argmax: None });
        }

        prev = cur;
        cur = next;
        h_cur = h_next;
        prev_slope = slope;
    }
    Err(Error::BracketFailure { t })
}

fn start_point(domain: &Interval) -> f64 {
    if domain.interior_contains(0.0) {
        return 0.0;
    }
    match (domain.lo.is_finite(), domain.hi.is_finite()) {
        (true, true) => 0.5 * (domain.lo + domain.hi),
        (true, false) => domain.lo + 1.0,
        (false, true) => domain.hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Move `s` back into `domain` along the segment from `from`, stopping at a
/// closed edge or halfway to an open one.
fn clamp_toward(domain: &Interval, from: f64, s: f64) -> f64 {
    if s >= domain.hi {
        if domain.hi_closed { domain.hi } else { from + 0.5 * (domain.hi - from) }
    } else if s <= domain.lo {
        if domain.lo_closed { domain.lo } else { from + 0.5 * (domain.lo - from) }
    } else {
        s
    }
}

/// Golden-section maximization of a concave `h` on `[a, b]`; endpoints are
/// evaluated too so that boundary maxima are not missed.
fn golden_max<H: Fn(f64) -> f64>(h: &H, domain: &Interval, mut a: f64, mut b: f64) -> ConjugatePoint {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut hc = h(c);
    let mut hd = h(d);
    for _ in 0..CONJUGATE_MAX_ITER {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if hc >= hd {
            b = d;
            d = c;
            hd = hc;
            c = b - INV_PHI * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + INV_PHI * (b - a);
            hd = h(d);
        }
    }
    let mut best = if hc >= hd { (c, hc) } else { (d, hd) };
    for end in [a, b] {
        if domain.contains(end) {
            let he = h(end);
            if he > best.1 {
                best = (end, he);
            }
        }
    }
    ConjugatePoint { value: best.1, argmax: Some(best.0) }
}

/// The closed-form integrands shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    /// `γ*(t) = t ln t − (1 + ln m) t + m`, `λ(s) = m (eˢ − s − 1)`.
    BoltzmannVariant,
    /// `γ*(t) = t ln t − t + 1`, `γ(s) = eˢ − 1`, `m ≡ 1`.
    BoltzmannSpecial,
    /// `γ*(t) = −ln t + t − 1`, `γ(s) = −ln(1 − s)` on `s < 1`, `m ≡ 1`.
    ReverseRelative,
    /// `γ*(t) = t²/2`, self-conjugate, `m ≡ 0`.
    Quadratic,
}

impl Catalog {
    pub const ALL: [Catalog; 4] = [
        Catalog::BoltzmannVariant,
        Catalog::BoltzmannSpecial,
        Catalog::ReverseRelative,
        Catalog::Quadratic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Catalog::BoltzmannVariant => "boltzmann_variant",
            Catalog::BoltzmannSpecial => "boltzmann_special",
            Catalog::ReverseRelative => "reverse_relative",
            Catalog::Quadratic => "quadratic",
        }
    }

    /// Known Δ₂ behaviour of `λ⋄`.
    pub fn delta2_flag(&self) -> Delta2Flag {
        match self {
            Catalog::Quadratic => Delta2Flag::Satisfied,
            _ => Delta2Flag::Violated,
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Catalog::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownEntropy(s.to_string()))
    }
}

/// Analytic Δ₂ status attached to an entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta2Flag {
    Satisfied,
    Violated,
}

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A user-supplied integrand `γ*` shared by all ground points.
pub struct CustomIntegrand {
    gamma_star: Box<ScalarFn>,
    domain: Interval,
    minimizer: f64,
    tol: f64,
}

impl fmt::Debug for CustomIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomIntegrand")
            .field("domain", &self.domain)
            .field("minimizer", &self.minimizer)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
enum Integrand {
    Closed(Catalog),
    Custom(Arc<CustomIntegrand>),
}

/// An entropy integrand together with its conjugate, derivative and
/// minimizer, evaluated per ground point.
///
/// Values are extended reals: `f64::INFINITY` stands for `+∞`.
#[derive(Clone, Debug)]
pub struct EntropySpec {
    name: String,
    integrand: Integrand,
    m: Vec<f64>,
}

impl EntropySpec {
    /// Closed-form entropy from the catalog.
    ///
    /// `m` is only accepted for `boltzmann_variant`, where it must be strictly
    /// positive; when omitted it defaults to `m ≡ 1`.
    pub fn catalog(name: &str, ground: &GroundSpace, m: Option<&[f64]>) -> Result<Self> {
        let kind: Catalog = name.parse()?;
        let n = ground.len();
        let m = match (kind, m) {
            (Catalog::BoltzmannVariant, Some(m)) => {
                if m.len() != n {
                    return Err(Error::LengthMismatch { expected: n, found: m.len() });
                }
                if let Some((index, &value)) = m.iter().enumerate().find(|(_, &v)| !(v > 0.0 && v.is_finite())) {
                    return Err(Error::NonpositiveWeightFunction { index, value });
                }
                m.to_vec()
            }
            (Catalog::BoltzmannVariant, None) => vec![1.0; n],
            (_, Some(_)) => return Err(Error::WeightFunctionNotAccepted(name.to_string())),
            (Catalog::Quadratic, None) => vec![0.0; n],
            (_, None) => vec![1.0; n],
        };
        Ok(EntropySpec { name: kind.as_str().to_string(), integrand: Integrand::Closed(kind), m })
    }

    /// Custom integrand `γ*`, identical at every ground point.
    ///
    /// `domain` is the interval where `γ*` is finite. The integrand must be
    /// strictly convex with minimum value 0; the minimizer is located
    /// numerically and stored as `m`.
    pub fn custom<F>(name: &str, gamma_star: F, domain: Interval, num_points: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let tol = CONJUGATE_TOL;
        // γ(0) = −min γ*, attained at the minimizer m.
        let at_zero = conjugate_with_argmax(&gamma_star, domain, 0.0, tol)?;
        let minimizer = at_zero.argmax.ok_or(Error::NotNormalized { value: -at_zero.value, at: f64::NAN })?;
        let min_value = gamma_star(minimizer);
        if min_value.abs() > 1e-8 || at_zero.value.abs() > 1e-8 {
            return Err(Error::NotNormalized { value: min_value, at: minimizer });
        }
        let custom = CustomIntegrand { gamma_star: Box::new(gamma_star), domain, minimizer, tol };
        Ok(EntropySpec {
            name: name.to_string(),
            integrand: Integrand::Custom(Arc::new(custom)),
            m: vec![minimizer; num_points],
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn catalog_kind(&self) -> Option<Catalog> {
        match self.integrand {
            Integrand::Closed(c) => Some(c),
            Integrand::Custom(_) => None,
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.integrand, Integrand::Closed(_))
    }

    pub fn num_points(&self) -> usize {
        self.m.len()
    }

    /// Weight function as supplied (only meaningful for `boltzmann_variant`).
    pub fn weight_function(&self) -> Option<&[f64]> {
        match self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant) => Some(&self.m),
            _ => None,
        }
    }

    /// Pointwise minimizer of `γ*(z, ·)`.
    pub fn m(&self, z: usize) -> f64 {
        self.m[z]
    }

    pub fn minimizers(&self) -> &[f64] {
        &self.m
    }

    /// Interval where `γ*(z, ·)` is finite.
    pub fn dom_gamma_star(&self, _z: usize) -> Interval {
        match &self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant | Catalog::BoltzmannSpecial) => Interval::from_lower(0.0, true),
            Integrand::Closed(Catalog::ReverseRelative) => Interval::from_lower(0.0, false),
            Integrand::Closed(Catalog::Quadratic) => Interval::REAL,
            Integrand::Custom(c) => c.domain,
        }
    }

    /// Interval where `γ(z, ·)` is finite. Custom integrands report the real
    /// line; evaluations outside the true domain return `+∞`.
    pub fn dom_gamma(&self, _z: usize) -> Interval {
        match &self.integrand {
            Integrand::Closed(Catalog::ReverseRelative) => Interval::to_upper(1.0, false),
            _ => Interval::REAL,
        }
    }

    pub fn gamma_star(&self, z: usize, t: f64) -> f64 {
        match &self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant) => {
                let m = self.m[z];
                if t > 0.0 {
                    t * (t / m).ln() - t + m
                } else if t == 0.0 {
                    m
                } else {
                    f64::INFINITY
                }
            }
            Integrand::Closed(Catalog::BoltzmannSpecial) => {
                if t > 0.0 {
                    t * t.ln() - t + 1.0
                } else if t == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            Integrand::Closed(Catalog::ReverseRelative) => {
                if t > 0.0 {
                    -t.ln() + t - 1.0
                } else {
                    f64::INFINITY
                }
            }
            Integrand::Closed(Catalog::Quadratic) => 0.5 * t * t,
            Integrand::Custom(c) => {
                if c.domain.contains(t) {
                    (c.gamma_star)(t)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn gamma(&self, z: usize, s: f64) -> f64 {
        match &self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant) => self.m[z] * s.exp_m1(),
            Integrand::Closed(Catalog::BoltzmannSpecial) => s.exp_m1(),
            Integrand::Closed(Catalog::ReverseRelative) => {
                if s < 1.0 {
                    -(-s).ln_1p()
                } else {
                    f64::INFINITY
                }
            }
            Integrand::Closed(Catalog::Quadratic) => 0.5 * s * s,
            Integrand::Custom(c) => conjugate_numeric(|t| (c.gamma_star)(t), c.domain, s, c.tol).unwrap_or(f64::INFINITY),
        }
    }

    /// Derivative of `γ(z, ·)`; `NaN` outside the interior of `dom γ`.
    pub fn gamma_prime(&self, z: usize, s: f64) -> f64 {
        match &self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant) => self.m[z] * s.exp(),
            Integrand::Closed(Catalog::BoltzmannSpecial) => s.exp(),
            Integrand::Closed(Catalog::ReverseRelative) => {
                if s < 1.0 {
                    1.0 / (1.0 - s)
                } else {
                    f64::NAN
                }
            }
            Integrand::Closed(Catalog::Quadratic) => s,
            Integrand::Custom(c) => conjugate_with_argmax(|t| (c.gamma_star)(t), c.domain, s, c.tol)
                .ok()
                .and_then(|p| if p.value.is_finite() { p.argmax } else { None })
                .unwrap_or(f64::NAN),
        }
    }

    /// Second derivative of `γ(z, ·)`; custom integrands use a centered
    /// difference of `γ′`.
    pub fn gamma_second(&self, z: usize, s: f64) -> f64 {
        match &self.integrand {
            Integrand::Closed(Catalog::BoltzmannVariant) => self.m[z] * s.exp(),
            Integrand::Closed(Catalog::BoltzmannSpecial) => s.exp(),
            Integrand::Closed(Catalog::ReverseRelative) => {
                if s < 1.0 {
                    let d = 1.0 - s;
                    1.0 / (d * d)
                } else {
                    f64::NAN
                }
            }
            Integrand::Closed(Catalog::Quadratic) => 1.0,
            Integrand::Custom(_) => {
                let h = 1e-4 * (1.0 + s.abs());
                (self.gamma_prime(z, s + h) - self.gamma_prime(z, s - h)) / (2.0 * h)
            }
        }
    }

    /// `true` when `s` lies in the open interior of `dom γ(z, ·)` and `γ′` is
    /// finite there.
    pub fn in_dual_domain(&self, z: usize, s: f64) -> bool {
        self.dom_gamma(z).interior_contains(s) && self.gamma(z, s).is_finite()
    }
}

/// Component selector for [`YoungFamily::eval`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YoungComponent {
    /// `λ(z, s) = γ(z, s) − m(z)s` (convex, not even).
    Lambda,
    /// `λ⋄(z, s) = max(λ(z, s), λ(z, −s))`.
    Diamond,
    /// `λ₊(z, s) = λ(z, |s|)`.
    Plus,
    /// `λ₋(z, s) = λ(z, −|s|)`.
    Minus,
    /// `λ*(z, t) = γ*(z, t + m(z))`.
    Conjugate,
}

impl FromStr for YoungComponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lambda" => YoungComponent::Lambda,
            "diamond" | "lambda_max" => YoungComponent::Diamond,
            "plus" | "lambda_plus" => YoungComponent::Plus,
            "minus" | "lambda_minus" => YoungComponent::Minus,
            "conjugate" | "lambda_star" => YoungComponent::Conjugate,
            other => return Err(Error::InvalidOption(format!("unknown Young component `{other}`"))),
        })
    }
}

/// The Young functions `λ, λ⋄, λ±, λ*` derived from an entropy.
#[derive(Clone, Debug)]
pub struct YoungFamily {
    spec: EntropySpec,
}

/// Assemble `λ, λ⋄, λ±, λ*` for an entropy.
pub fn young_family(spec: &EntropySpec) -> YoungFamily {
    YoungFamily { spec: spec.clone() }
}

impl YoungFamily {
    pub fn spec(&self) -> &EntropySpec {
        &self.spec
    }

    pub fn num_points(&self) -> usize {
        self.spec.num_points()
    }

    pub fn lambda(&self, z: usize, s: f64) -> f64 {
        let g = self.spec.gamma(z, s);
        if g == f64::INFINITY {
            return g;
        }
        match self.spec.catalog_kind() {
            // eˢ − 1 − s without cancellation near 0.
            Some(Catalog::BoltzmannVariant) => self.spec.m(z) * (s.exp_m1() - s),
            Some(Catalog::BoltzmannSpecial) => s.exp_m1() - s,
            _ => g - self.spec.m(z) * s,
        }
    }

    pub fn lambda_max(&self, z: usize, s: f64) -> f64 {
        self.lambda(z, s).max(self.lambda(z, -s))
    }

    pub fn lambda_plus(&self, z: usize, s: f64) -> f64 {
        self.lambda(z, s.abs())
    }

    pub fn lambda_minus(&self, z: usize, s: f64) -> f64 {
        self.lambda(z, -s.abs())
    }

    pub fn lambda_star(&self, z: usize, t: f64) -> f64 {
        self.spec.gamma_star(z, t + self.spec.m(z))
    }

    /// `λ*` through numeric conjugation of `λ`, independent of the closed form.
    pub fn lambda_star_numeric(&self, z: usize, t: f64, tol: f64) -> Result<f64> {
        conjugate_numeric(|s| self.lambda(z, s), self.spec.dom_gamma(z), t, tol)
    }

    /// Interval where `λ⋄(z, ·)` is finite.
    pub fn dom_diamond(&self, z: usize) -> Interval {
        let d = self.spec.dom_gamma(z);
        d.intersect(&d.reflect())
    }

    /// Conjugate of `λ⋄(z, ·)` by numeric conjugation.
    pub fn lambda_max_conjugate(&self, z: usize, t: f64, tol: f64) -> Result<f64> {
        conjugate_numeric(|s| self.lambda_max(z, s), self.dom_diamond(z), t, tol)
    }

    pub fn eval(&self, component: YoungComponent, z: usize, s: f64) -> f64 {
        match component {
            YoungComponent::Lambda => self.lambda(z, s),
            YoungComponent::Diamond => self.lambda_max(z, s),
            YoungComponent::Plus => self.lambda_plus(z, s),
            YoungComponent::Minus => self.lambda_minus(z, s),
            YoungComponent::Conjugate => self.lambda_star(z, s),
        }
    }

    pub fn delta2_flag(&self) -> Option<Delta2Flag> {
        self.spec.catalog_kind().map(|c| c.delta2_flag())
    }
}

/// Outcome of a Δ₂ classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Delta2Verdict {
    Satisfied,
    Violated { witness: f64 },
    Inconclusive,
}

/// Growth ratio above which `λ⋄(2s) > C λ⋄(s)` is taken as a violation witness.
pub const DELTA2_RATIO_CAP: f64 = 1e8;

/// Numeric search for a Δ₂ violation of `λ⋄` on the positive samples.
///
/// The bound `C` escalates through powers of 4; the search reports the
/// smallest sample at which the growth ratio still exceeds
/// [`DELTA2_RATIO_CAP`], or `None` when some `C` bounds every sampled ratio.
pub fn delta2_search(family: &YoungFamily, samples: &[f64]) -> Option<f64> {
    let ratio = |s: f64| -> f64 {
        (0..family.num_points())
            .map(|z| {
                let base = family.lambda_max(z, s);
                let doubled = family.lambda_max(z, 2.0 * s);
                if base > 0.0 && base.is_finite() {
                    doubled / base
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    };
    let positive: Vec<(f64, f64)> = samples.iter().copied().filter(|&s| s > 0.0).map(|s| (s, ratio(s))).collect();
    let mut bound = 4.0;
    let mut witness = None;
    while bound <= DELTA2_RATIO_CAP {
        match positive.iter().find(|(_, r)| *r > bound) {
            Some(&(s, _)) => witness = Some(s),
            None => return None,
        }
        bound *= 4.0;
    }
    // Smallest s beyond the cap.
    positive.iter().find(|(_, r)| *r > DELTA2_RATIO_CAP).map(|&(s, _)| s).or(witness)
}

/// Classify `λ⋄` as Δ₂-satisfying (good constraints) or violating (possible
/// bad constraints). Catalog entries carry an analytic flag; custom
/// integrands can only be shown to violate the condition.
pub fn delta2_classify(family: &YoungFamily, samples: &[f64]) -> Delta2Verdict {
    let found = delta2_search(family, samples);
    match (family.delta2_flag(), found) {
        (Some(Delta2Flag::Satisfied), _) => Delta2Verdict::Satisfied,
        (Some(Delta2Flag::Violated), Some(witness)) => Delta2Verdict::Violated { witness },
        (Some(Delta2Flag::Violated), None) => {
            let witness = samples.iter().copied().fold(f64::NAN, f64::max);
            Delta2Verdict::Violated { witness }
        }
        (None, Some(witness)) => Delta2Verdict::Violated { witness },
        (None, None) => Delta2Verdict::Inconclusive,
    }
}
