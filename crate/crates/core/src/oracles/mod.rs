//! Closed-form reference solutions and the elliptic-integral machinery they
//! need.

pub mod branches;
pub mod elliptic;
pub mod examples;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::GeodesicState;
use crate::initial_data::InitialCurve;
use crate::spacetime::Vector;

pub use branches::{BranchShape, EllipticBranch};
pub use elliptic::{amplitude, carlson_rf, complete_k, elliptic_f};
pub use examples::{BranchMotion, RadialNull, StaticStart, TiltedStart};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    RadialNull,
    PhotonSphere,
    Ex2Inner,
    Ex2Outer,
    Ex3Circular,
    Ex3Outer,
    Ex3Inner,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::RadialNull => "radial_null",
            OracleKind::PhotonSphere => "photon_sphere",
            OracleKind::Ex2Inner => "ex2_inner",
            OracleKind::Ex2Outer => "ex2_outer",
            OracleKind::Ex3Circular => "ex3_circular",
            OracleKind::Ex3Outer => "ex3_outer",
            OracleKind::Ex3Inner => "ex3_inner",
        }
    }

    /// Data family (1, 2 or 3) the case belongs to.
    pub fn family(self) -> u8 {
        match self {
            OracleKind::RadialNull => 1,
            OracleKind::PhotonSphere | OracleKind::Ex2Inner | OracleKind::Ex2Outer => 2,
            _ => 3,
        }
    }

    /// Case number within the family, `I`, `II` or `III`.
    pub fn case_number(self) -> u8 {
        match self {
            OracleKind::RadialNull | OracleKind::PhotonSphere | OracleKind::Ex3Circular => 1,
            OracleKind::Ex2Inner | OracleKind::Ex3Outer => 2,
            OracleKind::Ex2Outer | OracleKind::Ex3Inner => 3,
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Requested case: `auto`, a kind name, or a case number `1`/`2`/`3`
/// (also `I`/`II`/`III`) within the chosen family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseRequest {
    Auto,
    Kind(OracleKind),
    Number(u8),
}

impl FromStr for CaseRequest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kinds = [
            OracleKind::RadialNull,
            OracleKind::PhotonSphere,
            OracleKind::Ex2Inner,
            OracleKind::Ex2Outer,
            OracleKind::Ex3Circular,
            OracleKind::Ex3Outer,
            OracleKind::Ex3Inner,
        ];
        Ok(match lower.as_str() {
            "auto" => CaseRequest::Auto,
            "1" | "i" => CaseRequest::Number(1),
            "2" | "ii" => CaseRequest::Number(2),
            "3" | "iii" => CaseRequest::Number(3),
            other => CaseRequest::Kind(
                kinds
                    .into_iter()
                    .find(|k| k.name() == other)
                    .ok_or_else(|| Error::Parse(format!("unknown oracle case `{s}`")))?,
            ),
        })
    }
}

impl CaseRequest {
    /// Checks a request against the case implied by the parameters.
    pub fn check(self, actual: OracleKind) -> Result<()> {
        let ok = match self {
            CaseRequest::Auto => true,
            CaseRequest::Kind(k) => k == actual,
            CaseRequest::Number(n) => n == actual.case_number(),
        };
        if !ok {
            return Err(Error::OracleMismatch(format!(
                "requested case {self:?} but the parameters select {actual}"
            )));
        }
        Ok(())
    }
}

/// One of the three reference families.
#[derive(Debug, Clone)]
pub enum OracleSolution {
    RadialNull(RadialNull),
    StaticStart(StaticStart),
    TiltedStart(TiltedStart),
}

impl OracleSolution {
    pub fn kind(&self) -> OracleKind {
        match self {
            OracleSolution::RadialNull(_) => OracleKind::RadialNull,
            OracleSolution::StaticStart(o) => o.kind(),
            OracleSolution::TiltedStart(o) => o.kind(),
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            OracleSolution::RadialNull(o) => o.m,
            OracleSolution::StaticStart(o) => o.m,
            OracleSolution::TiltedStart(o) => o.m,
        }
    }

    pub fn initial_curve(&self, domain: (f64, f64)) -> Result<InitialCurve> {
        match self {
            OracleSolution::RadialNull(o) => o.initial_curve(domain),
            OracleSolution::StaticStart(o) => o.initial_curve(domain),
            OracleSolution::TiltedStart(o) => o.initial_curve(domain),
        }
    }

    /// States of the characteristic through `ϑ` at increasing times `ts`.
    pub fn sample(&self, vartheta: f64, ts: &[f64]) -> Result<Vec<GeodesicState>> {
        match self {
            OracleSolution::RadialNull(o) => ts.iter().map(|&t| o.state_at(t, vartheta)).collect(),
            OracleSolution::StaticStart(o) => o.sample(vartheta, ts),
            OracleSolution::TiltedStart(o) => o.sample(vartheta, ts),
        }
    }

    pub fn evaluate(&self, t: f64, vartheta: f64) -> Result<Vector> {
        Ok(self.sample(vartheta, &[t])?[0].y)
    }

    /// Residual of the closed-form relation defining the case, at a point
    /// `y` reached at time `t` on the characteristic `ϑ`.
    pub fn relation_residual(&self, t: f64, vartheta: f64, y: &Vector) -> Result<f64> {
        match self {
            OracleSolution::RadialNull(o) => Ok(o.tau_relation_residual(y)),
            OracleSolution::StaticStart(o) => o.relation_residual(t, vartheta, y),
            OracleSolution::TiltedStart(o) => o.relation_residual(t, vartheta, y),
        }
    }
}
