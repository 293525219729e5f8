//! The worldsheet `x(t, θ)` assembled from the geodesics `y(t, ϑ)` through
//! the inverse characteristic map, its induced metric on a grid, and CSV /
//! JSON export.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristics::CharacteristicMap;
use crate::error::{Error, Result};
use crate::geodesic::{integrate, GeodesicState, GeodesicTrajectory, SolverOptions, VelocityLift};
use crate::initial_data::InitialCurve;
use crate::spacetime::{induced_metric, InducedMetric, Spacetime, Vector, DIM};
use crate::spline::CubicSpline;

/// One integrated t-curve of the surface, labelled by its ϑ.
#[derive(Debug, Clone)]
pub struct Characteristic {
    pub vartheta: f64,
    pub trajectory: GeodesicTrajectory,
}

impl Characteristic {
    /// Time of the terminal event, if the curve stopped early.
    pub fn ended_at(&self) -> Option<f64> {
        self.trajectory.termination().map(|e| e.t)
    }
}

/// Integrates the characteristic geodesics through each `ϑ` up to `t_end`,
/// in parallel. Events are recorded on the trajectories, not raised.
pub fn integrate_characteristics<S: Spacetime + ?Sized>(
    spacetime: &S,
    curve: &InitialCurve,
    map: &CharacteristicMap,
    varthetas: &[f64],
    t_end: f64,
    opts: &SolverOptions,
    lift: VelocityLift,
) -> Result<Vec<Characteristic>> {
    varthetas
        .par_iter()
        .map(|&vt| {
            let state0 = GeodesicState::from_curve(curve, vt, map.lambda(vt), lift);
            Ok(Characteristic {
                vartheta: vt,
                trajectory: integrate(spacetime, state0, t_end, opts)?,
            })
        })
        .collect()
}

/// ϑ values for `n` characteristics: endpoints included, except that a
/// periodic domain drops the right endpoint (it repeats the left one).
pub fn characteristic_grid(curve: &InitialCurve, n: usize) -> Vec<f64> {
    let (a, b) = curve.domain;
    let n = n.max(2);
    if curve.periodic {
        (0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
    } else {
        curve.grid(n)
    }
}

/// Coordinate offset `φ(b) − φ(a)` carried by one period of a periodic
/// curve, e.g. `2π` in a winding angle.
pub fn period_shift(curve: &InitialCurve) -> Vector {
    let (a, b) = curve.domain;
    let (pa, pb) = (curve.phi(a), curve.phi(b));
    std::array::from_fn(|i| pb[i] - pa[i])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalType {
    Lightlike,
    Timelike,
    Spacelike,
}

impl CausalType {
    /// Light-like when `|Δ| ≤ max(ε_Δ, 1e-6·scale)`.
    pub fn classify(im: &InducedMetric, eps_delta: f64) -> Self {
        if im.delta.abs() <= eps_delta.max(1e-6 * im.scale()) {
            CausalType::Lightlike
        } else if im.delta > 0.0 {
            CausalType::Timelike
        } else {
            CausalType::Spacelike
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CausalType::Lightlike => "lightlike",
            CausalType::Timelike => "timelike",
            CausalType::Spacelike => "spacelike",
        }
    }
}

impl fmt::Display for CausalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceNode {
    pub vartheta: f64,
    pub x: Vector,
    pub x_t: Vector,
    pub x_theta: Vector,
    pub induced: InducedMetric,
    /// `∂ϑ/∂θ`.
    pub jacobian: f64,
    /// Δ computed from `(y_t, y_ϑ)` in the `(t, ϑ)` parameterization.
    pub delta_characteristic: f64,
    pub type_label: CausalType,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub t_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    /// `nodes[i][j]` sits at `(t_grid[i], theta_grid[j])`; `None` is truncated.
    pub nodes: Vec<Vec<Option<SurfaceNode>>>,
    /// Earliest event time among the characteristics feeding each θ column.
    pub truncation_map: Vec<Option<f64>>,
}

impl SurfaceMesh {
    pub fn node(&self, i: usize, j: usize) -> Option<&SurfaceNode> {
        self.nodes[i][j].as_ref()
    }

    pub fn iter_nodes(&self) -> impl Iterator<Item = (f64, f64, Option<&SurfaceNode>)> + '_ {
        self.t_grid.iter().enumerate().flat_map(move |(i, &t)| {
            self.theta_grid
                .iter()
                .enumerate()
                .map(move |(j, &th)| (t, th, self.nodes[i][j].as_ref()))
        })
    }

    pub fn truncated_count(&self) -> usize {
        self.nodes.iter().flatten().filter(|n| n.is_none()).count()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SurfaceOptions {
    pub eps_delta: f64,
    /// Offset between consecutive periods; `Some` makes the mesh wrap in ϑ.
    pub period_shift: Option<Vector>,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self {
            eps_delta: 1e-9,
            period_shift: None,
        }
    }
}

/// Splines of `y` and `y_t` over one contiguous run of live characteristics.
struct Run {
    lo: f64,
    hi: f64,
    y: Vec<CubicSpline>,
    v: Vec<CubicSpline>,
}

impl Run {
    fn eval(&self, vt: f64) -> (Vector, Vector, Vector) {
        (
            std::array::from_fn(|i| self.y[i].eval(vt)),
            std::array::from_fn(|i| self.v[i].eval(vt)),
            std::array::from_fn(|i| self.y[i].derivative(vt)),
        )
    }
}

struct Slice {
    runs: Vec<Run>,
}

/// A characteristic placed at `vartheta`, offset by `shift` when it is a
/// periodic copy.
struct Column<'a> {
    vartheta: f64,
    shift: Vector,
    source: &'a Characteristic,
}

const PADDING: usize = 3;

fn columns<'a>(chars: &'a [Characteristic], period: Option<(f64, Vector)>) -> Vec<Column<'a>> {
    let zero = [0.0; DIM];
    let mut cols: Vec<Column> = chars
        .iter()
        .map(|c| Column {
            vartheta: c.vartheta,
            shift: zero,
            source: c,
        })
        .collect();
    if let Some((p, jump)) = period {
        let n = chars.len();
        let pad = PADDING.min(n);
        let neg: Vector = std::array::from_fn(|i| -jump[i]);
        let left = chars[n - pad..].iter().map(|c| Column {
            vartheta: c.vartheta - p,
            shift: neg,
            source: c,
        });
        let right = chars[..pad].iter().map(|c| Column {
            vartheta: c.vartheta + p,
            shift: jump,
            source: c,
        });
        cols = left.chain(cols).chain(right).collect();
    }
    cols
}

fn build_slice(cols: &[Column], t: f64) -> Result<Slice> {
    let mut runs = Vec::new();
    let mut current: Vec<(f64, GeodesicState, Vector)> = Vec::new();
    let flush =
        |current: &mut Vec<(f64, GeodesicState, Vector)>, runs: &mut Vec<Run>| -> Result<()> {
            if current.len() >= 2 {
                let xs: Vec<f64> = current.iter().map(|c| c.0).collect();
                let mut y = Vec::with_capacity(DIM);
                let mut v = Vec::with_capacity(DIM);
                for i in 0..DIM {
                    y.push(CubicSpline::new(
                        xs.clone(),
                        current.iter().map(|c| c.1.y[i] + c.2[i]).collect(),
                    )?);
                    v.push(CubicSpline::new(
                        xs.clone(),
                        current.iter().map(|c| c.1.v[i]).collect(),
                    )?);
                }
                runs.push(Run {
                    lo: xs[0],
                    hi: xs[xs.len() - 1],
                    y,
                    v,
                });
            }
            current.clear();
            Ok(())
        };
    for col in cols {
        match col.source.trajectory.state_at(t) {
            Some(s) => current.push((col.vartheta, s, col.shift)),
            None => flush(&mut current, &mut runs)?,
        }
    }
    flush(&mut current, &mut runs)?;
    Ok(Slice { runs })
}

/// Assembles `x(t, θ) = y(t, ϑ(t, θ))` on `t_grid × theta_grid`.
///
/// `y` and `y_ϑ` between characteristics come from not-a-knot splines in ϑ
/// at fixed t; `x_t = y_t − Λ·(∂ϑ/∂θ)·y_ϑ` and `x_θ = (∂ϑ/∂θ)·y_ϑ`. Nodes
/// whose enclosing characteristics have ended, or whose θ falls outside the
/// image of the map, are truncated.
pub fn build_surface<S: Spacetime + ?Sized>(
    spacetime: &S,
    characteristics: &[Characteristic],
    map: &CharacteristicMap,
    t_grid: &[f64],
    theta_grid: &[f64],
    opts: &SurfaceOptions,
) -> Result<SurfaceMesh> {
    if characteristics.len() < 2 {
        return Err(Error::Coverage(format!(
            "{} characteristic(s) given; at least 2 are needed to span ϑ",
            characteristics.len()
        )));
    }
    if characteristics
        .windows(2)
        .any(|w| !(w[1].vartheta > w[0].vartheta))
    {
        return Err(Error::InvalidParameter(
            "characteristics must be sorted by increasing ϑ".into(),
        ));
    }
    let period = match (opts.period_shift, map.periodic()) {
        (Some(jump), true) => Some((map.domain().1 - map.domain().0, jump)),
        _ => None,
    };
    let cols = columns(characteristics, period);
    let slices: Vec<Slice> = t_grid
        .par_iter()
        .map(|&t| build_slice(&cols, t))
        .collect::<Result<_>>()?;
    if slices.first().is_some_and(|s| s.runs.is_empty()) {
        return Err(Error::Coverage(
            "no two neighbouring characteristics cover the first time".into(),
        ));
    }

    let column_results: Vec<(Vec<Option<SurfaceNode>>, Option<f64>)> = theta_grid
        .par_iter()
        .map(|&theta| {
            let mut col = Vec::with_capacity(t_grid.len());
            let mut earliest: Option<f64> = None;
            for (i, &t) in t_grid.iter().enumerate() {
                let node = node_at(
                    spacetime,
                    map,
                    &slices[i],
                    &cols,
                    t,
                    theta,
                    opts,
                    &mut earliest,
                )?;
                col.push(node);
            }
            Ok((col, earliest))
        })
        .collect::<Result<_>>()?;

    let mut nodes = vec![Vec::with_capacity(theta_grid.len()); t_grid.len()];
    let mut truncation_map = Vec::with_capacity(theta_grid.len());
    for (col, earliest) in column_results {
        for (i, n) in col.into_iter().enumerate() {
            nodes[i].push(n);
        }
        truncation_map.push(earliest);
    }
    Ok(SurfaceMesh {
        t_grid: t_grid.to_vec(),
        theta_grid: theta_grid.to_vec(),
        nodes,
        truncation_map,
    })
}

#[allow(clippy::too_many_arguments)]
fn node_at<S: Spacetime + ?Sized>(
    spacetime: &S,
    map: &CharacteristicMap,
    slice: &Slice,
    cols: &[Column],
    t: f64,
    theta: f64,
    opts: &SurfaceOptions,
    earliest: &mut Option<f64>,
) -> Result<Option<SurfaceNode>> {
    let vt = match map.invert(t, theta) {
        Ok(v) => v,
        Err(Error::BracketFailure { .. } | Error::MapBreakdown { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    // Events of the two characteristics enclosing ϑ.
    let k = cols.partition_point(|c| c.vartheta <= vt);
    for c in cols[k.saturating_sub(1)..(k + 1).min(cols.len())].iter() {
        if let Some(te) = c.source.ended_at() {
            *earliest = Some(earliest.map_or(te, |e: f64| e.min(te)));
        }
    }
    let Some(run) = slice.runs.iter().find(|r| vt >= r.lo && vt <= r.hi) else {
        return Ok(None);
    };
    let jac = map.jacobian(t, vt)?;
    let lam = map.lambda(vt);
    let (y, yt, yv) = run.eval(vt);
    let x_t: Vector = std::array::from_fn(|i| yt[i] - lam * jac * yv[i]);
    let x_theta: Vector = std::array::from_fn(|i| jac * yv[i]);
    let induced = match induced_metric(spacetime, &y, &x_t, &x_theta) {
        Ok(im) => im,
        Err(_) => return Ok(None),
    };
    let delta_characteristic = induced_metric(spacetime, &y, &yt, &yv)?.delta;
    Ok(Some(SurfaceNode {
        vartheta: vt,
        x: y,
        x_t,
        x_theta,
        induced,
        jacobian: jac,
        delta_characteristic,
        type_label: CausalType::classify(&induced, opts.eps_delta),
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaReport {
    pub max_abs_delta: f64,
    /// `(t, θ)` of the largest `|Δ|`.
    pub at: (f64, f64),
    pub nodes: usize,
    pub truncated: usize,
    pub lightlike: usize,
    pub timelike: usize,
    pub spacelike: usize,
    /// Largest `|Δ(t,θ) − Δ(t,ϑ)·(∂ϑ/∂θ)²|`.
    pub reparameterization_gap: f64,
    /// Smallest `|g00|`, `|g01|`, `|g11|` over the live nodes.
    pub min_abs_components: [f64; 3],
}

impl DeltaReport {
    pub fn all_lightlike(&self) -> bool {
        self.nodes > 0 && self.lightlike == self.nodes
    }
}

/// Scans the live nodes of a mesh for the worst `|Δ|` and tallies causal types.
pub fn delta_monitor(mesh: &SurfaceMesh) -> DeltaReport {
    let mut r = DeltaReport {
        max_abs_delta: 0.0,
        at: (f64::NAN, f64::NAN),
        nodes: 0,
        truncated: 0,
        lightlike: 0,
        timelike: 0,
        spacelike: 0,
        reparameterization_gap: 0.0,
        min_abs_components: [f64::INFINITY; 3],
    };
    for (t, th, node) in mesh.iter_nodes() {
        let Some(n) = node else {
            r.truncated += 1;
            continue;
        };
        r.nodes += 1;
        let d = n.induced.delta.abs();
        if d > r.max_abs_delta || r.at.0.is_nan() {
            r.max_abs_delta = d;
            r.at = (t, th);
        }
        match n.type_label {
            CausalType::Lightlike => r.lightlike += 1,
            CausalType::Timelike => r.timelike += 1,
            CausalType::Spacelike => r.spacelike += 1,
        }
        let gap = (n.induced.delta - n.delta_characteristic * n.jacobian * n.jacobian).abs();
        r.reparameterization_gap = r.reparameterization_gap.max(gap);
        let c = [n.induced.g00, n.induced.g01, n.induced.g11];
        for (lo, v) in r.min_abs_components.iter_mut().zip(c) {
            *lo = lo.min(v.abs());
        }
    }
    r
}

/// `max |Δ|` at successive refinement levels.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTrend {
    pub levels: Vec<usize>,
    pub max_abs_delta: Vec<f64>,
}

impl RefinementTrend {
    /// Each level is no worse than the previous one, allowing for values
    /// already at the rounding floor.
    pub fn is_decreasing(&self, noise_floor: f64) -> bool {
        self.max_abs_delta
            .windows(2)
            .all(|w| w[1] <= w[0].max(noise_floor) * (1.0 + 1e-3))
    }
}

/// Runs `max_delta_at(level)` for each level, e.g. characteristic counts.
pub fn refinement_trend<F>(levels: &[usize], mut max_delta_at: F) -> Result<RefinementTrend>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut values = Vec::with_capacity(levels.len());
    for &n in levels {
        values.push(max_delta_at(n)?);
    }
    Ok(RefinementTrend {
        levels: levels.to_vec(),
        max_abs_delta: values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Parse(format!(
                "unknown export format `{other}` (csv or json)"
            ))),
        }
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "t", "theta", "vartheta", "tau", "r", "alpha", "beta", "g00", "g01", "g11", "delta", "type",
];

/// One exported mesh node. Coordinate fields are empty on truncated rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshRow {
    pub t: f64,
    pub theta: f64,
    pub vartheta: Option<f64>,
    pub tau: Option<f64>,
    pub r: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub g00: Option<f64>,
    pub g01: Option<f64>,
    pub g11: Option<f64>,
    pub delta: Option<f64>,
    #[serde(rename = "type")]
    pub type_label: String,
}

impl MeshRow {
    fn from_node(t: f64, theta: f64, node: Option<&SurfaceNode>) -> Self {
        match node {
            Some(n) => Self {
                t,
                theta,
                vartheta: Some(n.vartheta),
                tau: Some(n.x[0]),
                r: Some(n.x[1]),
                alpha: Some(n.x[2]),
                beta: Some(n.x[3]),
                g00: Some(n.induced.g00),
                g01: Some(n.induced.g01),
                g11: Some(n.induced.g11),
                delta: Some(n.induced.delta),
                type_label: n.type_label.to_string(),
            },
            None => Self {
                t,
                theta,
                vartheta: None,
                tau: None,
                r: None,
                alpha: None,
                beta: None,
                g00: None,
                g01: None,
                g11: None,
                delta: None,
                type_label: "truncated".into(),
            },
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.type_label == "truncated"
    }

    fn fields(&self) -> [Option<f64>; 11] {
        [
            Some(self.t),
            Some(self.theta),
            self.vartheta,
            self.tau,
            self.r,
            self.alpha,
            self.beta,
            self.g00,
            self.g01,
            self.g11,
            self.delta,
        ]
    }
}

/// Mesh in export form: rows grouped by `t`, then `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshTable {
    pub t_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub rows: Vec<Vec<MeshRow>>,
}

impl MeshTable {
    pub fn from_mesh(mesh: &SurfaceMesh) -> Self {
        let rows = mesh
            .t_grid
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                mesh.theta_grid
                    .iter()
                    .enumerate()
                    .map(|(j, &th)| MeshRow::from_node(t, th, mesh.node(i, j)))
                    .collect()
            })
            .collect();
        Self {
            t_grid: mesh.t_grid.clone(),
            theta_grid: mesh.theta_grid.clone(),
            rows,
        }
    }

    pub fn flat_rows(&self) -> impl Iterator<Item = &MeshRow> {
        self.rows.iter().flatten()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in self.flat_rows() {
            let mut rec: Vec<String> = row
                .fields()
                .iter()
                .map(|f| f.map(|v| format!("{v:.16e}")).unwrap_or_default())
                .collect();
            rec.push(row.type_label.clone());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
        if header != CSV_HEADER {
            return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
        }
        let mut flat = Vec::new();
        for (line, rec) in rd.records().enumerate() {
            let rec = rec?;
            let num = |i: usize| -> Result<Option<f64>> {
                let s = rec.get(i).unwrap_or("");
                if s.is_empty() {
                    return Ok(None);
                }
                s.parse::<f64>().map(Some).map_err(|e| {
                    Error::Parse(format!("row {}, column {}: {e}", line + 1, CSV_HEADER[i]))
                })
            };
            let req = |i: usize| -> Result<f64> {
                num(i)?.ok_or_else(|| {
                    Error::Parse(format!("row {}: empty {}", line + 1, CSV_HEADER[i]))
                })
            };
            flat.push(MeshRow {
                t: req(0)?,
                theta: req(1)?,
                vartheta: num(2)?,
                tau: num(3)?,
                r: num(4)?,
                alpha: num(5)?,
                beta: num(6)?,
                g00: num(7)?,
                g01: num(8)?,
                g11: num(9)?,
                delta: num(10)?,
                type_label: rec.get(11).unwrap_or("").to_string(),
            });
        }
        Ok(Self::regroup(flat))
    }

    fn regroup(flat: Vec<MeshRow>) -> Self {
        let mut t_grid: Vec<f64> = Vec::new();
        let mut rows: Vec<Vec<MeshRow>> = Vec::new();
        for row in flat {
            if t_grid.last() != Some(&row.t) {
                t_grid.push(row.t);
                rows.push(Vec::new());
            }
            rows.last_mut().expect("pushed above").push(row);
        }
        let theta_grid = rows
            .first()
            .map(|r| r.iter().map(|x| x.theta).collect())
            .unwrap_or_default();
        Self {
            t_grid,
            theta_grid,
            rows,
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        Ok(serde_json::from_reader(input)?)
    }

    pub fn to_string(&self, format: ExportFormat) -> Result<String> {
        let mut buf = Vec::new();
        match format {
            ExportFormat::Csv => self.write_csv(&mut buf)?,
            ExportFormat::Json => self.write_json(&mut buf)?,
        }
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn parse(text: &str, format: ExportFormat) -> Result<Self> {
        match format {
            ExportFormat::Csv => Self::read_csv(text.as_bytes()),
            ExportFormat::Json => Self::read_json(text.as_bytes()),
        }
    }
}

/// Writes `mesh` to `path`.
pub fn export(mesh: &SurfaceMesh, format: ExportFormat, path: &Path) -> Result<()> {
    let table = MeshTable::from_mesh(mesh);
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        ExportFormat::Csv => table.write_csv(&mut w)?,
        ExportFormat::Json => table.write_json(&mut w)?,
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`export`].
pub fn import(format: ExportFormat, path: &Path) -> Result<MeshTable> {
    let f = File::open(path)?;
    match format {
        ExportFormat::Csv => MeshTable::read_csv(f),
        ExportFormat::Json => MeshTable::read_json(f),
    }
}

/// Accepted states of every characteristic as CSV
/// `t,theta,vartheta,lambda,jacobian,tau,r,alpha,beta,event`, where
/// `theta = ϑ + Λ(ϑ)t` and `jacobian = ∂ϑ/∂θ` (empty past a breakdown).
pub fn write_characteristics<W: Write>(
    chars: &[Characteristic],
    map: &CharacteristicMap,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t", "theta", "vartheta", "lambda", "jacobian", "tau", "r", "alpha", "beta", "event",
    ])?;
    let num = |x: f64| format!("{x:.16e}");
    for c in chars {
        let term = c.trajectory.termination();
        let last = c.trajectory.states.len() - 1;
        let lam = map.lambda(c.vartheta);
        for (k, s) in c.trajectory.states.iter().enumerate() {
            let mut rec = vec![
                num(s.t),
                num(map.forward(c.vartheta, s.t)),
                num(c.vartheta),
                num(lam),
            ];
            rec.push(map.jacobian(s.t, c.vartheta).map(num).unwrap_or_default());
            rec.extend(s.y.iter().map(|&x| num(x)));
            rec.push(match term {
                Some(e) if k == last => e.kind.to_string(),
                _ => String::new(),
            });
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
