use thiserror::Error;

/// Errors raised while building or solving entropy minimization problems.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown entropy `{0}` (expected boltzmann_variant, boltzmann_special, reverse_relative or quadratic)")]
    UnknownEntropy(String),

    #[error("weight function m must be strictly positive, got m[{index}] = {value}")]
    NonpositiveWeightFunction { index: usize, value: f64 },

    #[error("entropy `{0}` does not take a weight function")]
    WeightFunctionNotAccepted(String),

    #[error("custom integrand is not normalized: min gamma* = {value} at t = {at}")]
    NotNormalized { value: f64, at: f64 },

    #[error("could not bracket a maximizer of s*t - f(s) at t = {t}")]
    BracketFailure { t: f64 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a Young function: {0}")]
    NotAYoungFunction(String),

    #[error("Luxemburg bracket overflow: integral still above 1 at beta = {0}")]
    NormOverflow(f64),

    #[error("moment map is degenerate: smallest Gram eigenvalue {min_eigenvalue} <= {threshold}")]
    DegenerateMomentMap { min_eigenvalue: f64, threshold: f64 },

    #[error("dual point leaves dom gamma at ground point {point} (s = {s})")]
    DomainViolation { point: usize, s: f64 },

    #[error("invalid ground space: {0}")]
    InvalidGround(String),

    #[error("invalid target set: {0}")]
    InvalidTarget(String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("zero denominator in {axis} update at index {index}: positive target on a zero kernel slice")]
    ZeroDenominator { axis: &'static str, index: usize },

    #[error("iterative fitting did not converge within {sweeps} sweeps (marginal error {error})")]
    NotConverged { sweeps: usize, error: f64 },

    #[error("invalid marginal problem: {0}")]
    InvalidMarginals(String),

    #[error("feasible set is empty or cannot be parameterized: {0}")]
    InfeasibleParameterization(String),

    #[error("oracle limits exceeded: {0}")]
    OracleLimits(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
