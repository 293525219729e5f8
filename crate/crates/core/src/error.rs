use std::fmt;

use thiserror::Error;

/// A coordinate point fell outside the chart where a spacetime is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainViolation {
    /// Index of the offending coordinate.
    pub coordinate: usize,
    /// Human-readable coordinate name, e.g. `"r"`.
    pub name: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

impl fmt::Display for DomainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coordinate {} (x^{}) = {} violates domain: {}",
            self.name, self.coordinate, self.value, self.reason
        )
    }
}

impl std::error::Error for DomainViolation {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainViolation),

    #[error("finite-difference stencil leaves the coordinate domain: {0}")]
    MarginViolation(DomainViolation),

    #[error("metric is singular at x = {x:?}")]
    SingularMetric { x: [f64; 4] },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Λ undefined at ϑ = {theta}: |g11| = {g11:e} is below {eps:e}")]
    DegenerateG11 { theta: f64, g11: f64, eps: f64 },

    #[error("horizon violation: φ₁(ϑ) = {r} must exceed 2m = {two_m}")]
    Horizon { r: f64, two_m: f64 },

    #[error("θ = {theta} is outside the image of the characteristic map at t = {t}")]
    BracketFailure { t: f64, theta: f64 },

    #[error("characteristic map is not monotone at t = {t}, ϑ = {vartheta}: 1 + Λ'(ϑ)t = {denominator:e}")]
    MapBreakdown {
        t: f64,
        vartheta: f64,
        denominator: f64,
    },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("cubic profile undefined: {0}")]
    ProfileUndefined(String),

    #[error("value outside the valid range of this branch: {0}")]
    BranchRange(String),

    #[error("insufficient characteristic coverage: {0}")]
    Coverage(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
