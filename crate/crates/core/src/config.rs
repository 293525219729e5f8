//! Run configuration: a TOML document with `spacetime`, `initial_data`,
//! `solver`, `output`, optional `oracle` and `compare` blocks, and a `seed`.
//! Any key can be overridden from the environment as
//! `LIGHTLIKE_<BLOCK>__<KEY>=value`.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geodesic::{Guards, SolverOptions, VelocityLift};
use crate::initial_data::{uniform_grid, CurveComponent, InitialCurve, Tolerances};
use crate::oracles::{CaseRequest, OracleSolution, RadialNull, StaticStart, TiltedStart};
use crate::spacetime::{MinkowskiSpherical, Schwarzschild, Spacetime, Vector, DIM};
use crate::surface::ExportFormat;

pub const ENV_PREFIX: &str = "LIGHTLIKE_";

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub spacetime: SpacetimeBlock,
    pub initial_data: InitialDataBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub output: OutputBlock,
    pub oracle: Option<OracleBlock>,
    #[serde(default)]
    pub compare: CompareBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacetimeType {
    Schwarzschild,
    MinkowskiSpherical,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeBlock {
    #[serde(rename = "type")]
    pub kind: SpacetimeType,
    pub mass: Option<f64>,
}

/// Four expressions, or the path of a CSV with columns `theta,c0,c1,c2,c3`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComponentSource {
    Exprs(Vec<String>),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataBlock {
    pub phi: ComponentSource,
    pub psi: ComponentSource,
    pub theta_range: Option<[f64; 2]>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub periodic: bool,
    /// Available in expressions as `s` (first entry) and `s1`, `s2`, ...
    #[serde(default)]
    pub signs: Vec<f64>,
    /// Extra named constants for the expressions; `m` is always defined.
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default = "default_eps_delta")]
    pub eps_delta: f64,
    #[serde(default = "default_eps_mono")]
    pub eps_mono: f64,
    #[serde(default = "default_eps_g11")]
    pub eps_g11: f64,
}

fn default_samples() -> usize {
    64
}
fn default_eps_delta() -> f64 {
    Tolerances::default().eps_delta
}
fn default_eps_mono() -> f64 {
    Tolerances::default().eps_mono
}
fn default_eps_g11() -> f64 {
    Tolerances::default().eps_g11
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub max_steps: usize,
    pub eps_horizon: f64,
    pub eps_axis: f64,
    pub characteristics: usize,
    pub velocity_lift: VelocityLift,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let s = SolverOptions::default();
        Self {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            t_end: 10.0,
            max_steps: s.max_steps,
            eps_horizon: s.guards.eps_horizon,
            eps_axis: s.guards.eps_axis,
            characteristics: 64,
            velocity_lift: VelocityLift::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub format: ExportFormat,
    pub path: PathBuf,
    /// Number of output times in `[0, t_end]`.
    pub t_count: usize,
    /// Number of output θ values.
    pub theta_count: usize,
    /// Defaults to the data's `theta_range`.
    pub theta_range: Option<[f64; 2]>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            format: ExportFormat::Csv,
            path: PathBuf::from("mesh.csv"),
            t_count: 21,
            theta_count: 33,
            theta_range: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    pub example: u8,
    #[serde(default = "default_case")]
    pub case: String,
    /// Must match `spacetime.mass` when given.
    pub mass: Option<f64>,
    pub r0: f64,
    /// Radial velocity of the radial-null family.
    pub r1: Option<f64>,
    #[serde(default)]
    pub tau0: f64,
    /// Expression in `theta` for the radial-null family, a number otherwise.
    pub alpha0: Option<String>,
    #[serde(default)]
    pub beta0: f64,
    /// Time-rate expression `f(theta)` of the static-start family.
    pub f: Option<String>,
    #[serde(default = "default_sign")]
    pub sign: f64,
}

fn default_case() -> String {
    "auto".into()
}
fn default_sign() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareBlock {
    pub tol: f64,
    /// Largest allowed mismatch between the oracle's data and `initial_data`.
    pub data_tol: f64,
}

impl Default for CompareBlock {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            data_tol: 1e-10,
        }
    }
}

/// Parses TOML text, applies `LIGHTLIKE_*` overrides from `env`, and checks
/// the schema.
pub fn parse_config(text: &str, env: &[(String, String)]) -> Result<RunConfig> {
    let mut root: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| config_err("<document>", e.message().to_string()))?;
    apply_overrides(&mut root, env)?;
    let cfg: RunConfig =
        serde_path_to_error::deserialize(toml::Value::Table(root)).map_err(|e| {
            let path = e.path().to_string();
            config_err(
                if path == "." { "<document>" } else { &path },
                e.into_inner().to_string(),
            )
        })?;
    cfg.check()?;
    Ok(cfg)
}

/// Reads `path` and applies overrides from the process environment.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err("<file>", format!("cannot read {}: {e}", path.display())))?;
    let env: Vec<(String, String)> = std::env::vars().collect();
    let mut cfg = parse_config(&text, &env)?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(cfg)
}

fn parse_override(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// `LIGHTLIKE_SOLVER__T_END=5` sets `solver.t_end = 5`.
pub fn apply_overrides(root: &mut toml::Table, env: &[(String, String)]) -> Result<()> {
    let mut pairs: Vec<&(String, String)> = env
        .iter()
        .filter(|(k, _)| k.starts_with(ENV_PREFIX))
        .collect();
    pairs.sort();
    for (key, raw) in pairs {
        let path: Vec<String> = key[ENV_PREFIX.len()..]
            .split("__")
            .map(|s| s.to_ascii_lowercase())
            .collect();
        if path.iter().any(|s| s.is_empty()) {
            return Err(config_err(key, "malformed override name"));
        }
        let mut table = &mut *root;
        for seg in &path[..path.len() - 1] {
            let entry = table
                .entry(seg.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            table = entry
                .as_table_mut()
                .ok_or_else(|| config_err(&path.join("."), format!("`{seg}` is not a table")))?;
        }
        table.insert(path[path.len() - 1].clone(), parse_override(raw));
    }
    Ok(())
}

impl RunConfig {
    fn check(&self) -> Result<()> {
        let positive = |path: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_err(path, format!("must be positive, got {v}")))
            }
        };
        match (self.spacetime.kind, self.spacetime.mass) {
            (SpacetimeType::Schwarzschild, None) => {
                return Err(config_err(
                    "spacetime.mass",
                    "required for type = \"schwarzschild\"",
                ))
            }
            (SpacetimeType::Schwarzschild, Some(m)) => positive("spacetime.mass", m)?,
            _ => {}
        }
        let d = &self.initial_data;
        for (name, src) in [("initial_data.phi", &d.phi), ("initial_data.psi", &d.psi)] {
            if let ComponentSource::Exprs(v) = src {
                if v.len() != DIM {
                    return Err(config_err(
                        name,
                        format!("expected {DIM} expressions, got {}", v.len()),
                    ));
                }
            }
        }
        if matches!(d.phi, ComponentSource::Exprs(_)) && d.theta_range.is_none() {
            return Err(config_err(
                "initial_data.theta_range",
                "required when phi is given by expressions",
            ));
        }
        if let Some([a, b]) = d.theta_range {
            if !(b > a) {
                return Err(config_err(
                    "initial_data.theta_range",
                    format!("must be increasing, got [{a}, {b}]"),
                ));
            }
        }
        if d.samples < 2 {
            return Err(config_err("initial_data.samples", "need at least 2"));
        }
        if let Some(s) = d.signs.iter().find(|s| s.abs() != 1.0) {
            return Err(config_err(
                "initial_data.signs",
                format!("entries must be ±1, got {s}"),
            ));
        }
        positive("initial_data.eps_delta", d.eps_delta)?;
        positive("initial_data.eps_mono", d.eps_mono)?;
        positive("initial_data.eps_g11", d.eps_g11)?;
        let s = &self.solver;
        positive("solver.rel_tol", s.rel_tol)?;
        positive("solver.abs_tol", s.abs_tol)?;
        positive("solver.t_end", s.t_end)?;
        positive("solver.eps_horizon", s.eps_horizon)?;
        positive("solver.eps_axis", s.eps_axis)?;
        if s.max_steps == 0 {
            return Err(config_err("solver.max_steps", "must be positive"));
        }
        if s.characteristics < 2 {
            return Err(config_err("solver.characteristics", "need at least 2"));
        }
        let o = &self.output;
        if o.t_count < 1 {
            return Err(config_err("output.t_count", "need at least 1"));
        }
        if o.theta_count < 1 {
            return Err(config_err("output.theta_count", "need at least 1"));
        }
        if let Some([a, b]) = o.theta_range {
            if !(b >= a) {
                return Err(config_err(
                    "output.theta_range",
                    format!("must be non-decreasing, got [{a}, {b}]"),
                ));
            }
        }
        positive("compare.tol", self.compare.tol)?;
        positive("compare.data_tol", self.compare.data_tol)?;
        if let Some(or) = &self.oracle {
            if !(1..=3).contains(&or.example) {
                return Err(config_err(
                    "oracle.example",
                    format!("must be 1, 2 or 3, got {}", or.example),
                ));
            }
            or.case
                .parse::<CaseRequest>()
                .map_err(|e| config_err("oracle.case", e.to_string()))?;
            if or.sign.abs() != 1.0 {
                return Err(config_err(
                    "oracle.sign",
                    format!("must be ±1, got {}", or.sign),
                ));
            }
        }
        Ok(())
    }

    /// Makes relative sample-file and output paths relative to the config file.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for src in [&mut self.initial_data.phi, &mut self.initial_data.psi] {
            if let ComponentSource::File(p) = src {
                fix(p);
            }
        }
        fix(&mut self.output.path);
    }

    pub fn mass(&self) -> Option<f64> {
        self.spacetime.mass
    }

    pub fn spacetime(&self) -> Result<Arc<dyn Spacetime>> {
        Ok(match self.spacetime.kind {
            SpacetimeType::Schwarzschild => {
                let m = self
                    .mass()
                    .ok_or_else(|| config_err("spacetime.mass", "missing"))?;
                Arc::new(
                    Schwarzschild::new(m)
                        .map_err(|e| config_err("spacetime.mass", e.to_string()))?,
                )
            }
            SpacetimeType::MinkowskiSpherical => Arc::new(MinkowskiSpherical::default()),
        })
    }

    /// Expression constants: user constants, `m`, and the signs.
    pub fn constants(&self) -> HashMap<String, f64> {
        let d = &self.initial_data;
        let mut c: HashMap<String, f64> =
            d.constants.iter().map(|(k, v)| (k.clone(), *v)).collect();
        if let Some(m) = self.mass() {
            c.insert("m".into(), m);
        }
        if let Some(&s) = d.signs.first() {
            c.insert("s".into(), s);
        }
        for (i, &s) in d.signs.iter().enumerate() {
            c.insert(format!("s{}", i + 1), s);
        }
        c
    }

    pub fn initial_curve(&self) -> Result<InitialCurve> {
        let d = &self.initial_data;
        let consts = self.constants();
        match (&d.phi, &d.psi) {
            (ComponentSource::Exprs(phi), ComponentSource::Exprs(psi)) => {
                let [a, b] = d.theta_range.expect("checked");
                let comps = |name: &str, srcs: &[String]| -> Result<[CurveComponent; DIM]> {
                    let one = |i: usize| {
                        CurveComponent::expr(&srcs[i], &consts).map_err(|e| {
                            config_err(&format!("initial_data.{name}[{i}]"), e.to_string())
                        })
                    };
                    Ok([one(0)?, one(1)?, one(2)?, one(3)?])
                };
                InitialCurve::new(comps("phi", phi)?, comps("psi", psi)?, (a, b), d.periodic)
            }
            (ComponentSource::File(pf), ComponentSource::File(qf)) => {
                let (t1, phi) =
                    read_samples(pf).map_err(|e| config_err("initial_data.phi", e.to_string()))?;
                let (t2, psi) =
                    read_samples(qf).map_err(|e| config_err("initial_data.psi", e.to_string()))?;
                if t1 != t2 {
                    return Err(config_err(
                        "initial_data.psi",
                        "sample files must share the same theta column",
                    ));
                }
                if let Some([a, b]) = d.theta_range {
                    if a != t1[0] || b != t1[t1.len() - 1] {
                        return Err(config_err(
                            "initial_data.theta_range",
                            "does not match the sample file range",
                        ));
                    }
                }
                InitialCurve::from_samples(&t1, &phi, &psi, d.periodic)
            }
            _ => Err(config_err(
                "initial_data.psi",
                "phi and psi must both be expressions or both be sample files",
            )),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            eps_delta: self.initial_data.eps_delta,
            eps_mono: self.initial_data.eps_mono,
            eps_g11: self.initial_data.eps_g11,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        let s = &self.solver;
        SolverOptions {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            max_steps: s.max_steps,
            guards: Guards {
                eps_horizon: s.eps_horizon,
                eps_axis: s.eps_axis,
            },
        }
    }

    pub fn sample_grid(&self, curve: &InitialCurve) -> Vec<f64> {
        uniform_grid(curve.domain, self.initial_data.samples)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.output.t_count;
        if n == 1 {
            return vec![0.0];
        }
        uniform_grid((0.0, self.solver.t_end), n)
    }

    pub fn theta_grid(&self, curve: &InitialCurve) -> Vec<f64> {
        let (a, b) = match self.output.theta_range {
            Some([a, b]) => (a, b),
            None => curve.domain,
        };
        let n = self.output.theta_count;
        if n == 1 || a == b {
            return vec![0.5 * (a + b)];
        }
        if curve.periodic && self.output.theta_range.is_none() {
            return (0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        }
        uniform_grid((a, b), n)
    }

    /// The oracle described by the `oracle` block.
    pub fn oracle(&self) -> Result<Option<OracleSolution>> {
        let Some(o) = &self.oracle else {
            return Ok(None);
        };
        let m = self.mass().ok_or_else(|| {
            Error::OracleMismatch(
                "the closed-form references need a Schwarzschild spacetime".into(),
            )
        })?;
        if let Some(om) = o.mass {
            if om != m {
                return Err(Error::OracleMismatch(format!(
                    "oracle.mass = {om} differs from spacetime.mass = {m}"
                )));
            }
        }
        let consts = self.constants();
        let expr = |path: &str, src: &Option<String>, default: &str| -> Result<CurveComponent> {
            CurveComponent::expr(src.as_deref().unwrap_or(default), &consts)
                .map_err(|e| config_err(path, e.to_string()))
        };
        let sol = match o.example {
            1 => {
                let r1 =
                    o.r1.ok_or_else(|| config_err("oracle.r1", "required for example 1"))?;
                let alpha0 = expr("oracle.alpha0", &o.alpha0, "pi/2")?;
                OracleSolution::RadialNull(RadialNull::new(m, o.r0, r1, o.tau0, alpha0, o.sign)?)
            }
            2 => {
                let alpha0 = Expr::parse(o.alpha0.as_deref().unwrap_or("pi/2"), &consts)
                    .map_err(|e| config_err("oracle.alpha0", e.to_string()))?;
                if !alpha0.is_constant() {
                    return Err(config_err(
                        "oracle.alpha0",
                        "must be a constant for example 2",
                    ));
                }
                let f = expr("oracle.f", &o.f, "1")?;
                OracleSolution::StaticStart(StaticStart::new(
                    m,
                    o.r0,
                    o.tau0,
                    alpha0.eval(0.0),
                    f,
                    o.sign,
                )?)
            }
            _ => OracleSolution::TiltedStart(TiltedStart::new(m, o.r0, o.beta0, o.sign)?),
        };
        let req: CaseRequest = o.case.parse()?;
        req.check(sol.kind())?;
        Ok(Some(sol))
    }
}

/// Reads a CSV with a header and columns `theta, c0, c1, c2, c3`.
pub fn read_samples(path: &Path) -> Result<(Vec<f64>, Vec<Vector>)> {
    let mut rd = csv::Reader::from_path(path)?;
    let mut thetas = Vec::new();
    let mut vals = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        if rec.len() != DIM + 1 {
            return Err(Error::Parse(format!(
                "{}: row {} has {} columns, expected {}",
                path.display(),
                i + 1,
                rec.len(),
                DIM + 1
            )));
        }
        let mut nums = [0.0; DIM + 1];
        for (k, field) in rec.iter().enumerate() {
            nums[k] = field
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("{}: row {}: {e}", path.display(), i + 1)))?;
        }
        thetas.push(nums[0]);
        vals.push([nums[1], nums[2], nums[3], nums[4]]);
    }
    Ok((thetas, vals))
}
