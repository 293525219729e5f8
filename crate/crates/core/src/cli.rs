//! Command-line driver: `validate`, `solve`, `compare`, `classify` and
//! `oracle`.
//!
//! Exit codes: 0 on success, 1 when a check fails or the run breaks down, 2
//! for configuration errors and oracle/data mismatches.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::characteristics::CharacteristicMap;
use crate::config::{load_config, RunConfig};
use crate::error::{Error, Result};
use crate::geodesic::{conserved_along, EventKind};
use crate::initial_data::{uniform_grid, validate, CurveComponent, InitialCurve};
use crate::oracles::examples::angle_difference;
use crate::oracles::{CaseRequest, OracleSolution, RadialNull, StaticStart, TiltedStart};
use crate::reduction::CubicProfile;
use crate::spacetime::{SchwarzschildParams, Spacetime, DIM};
use crate::surface::{
    build_surface, characteristic_grid, delta_monitor, export, integrate_characteristics,
    period_shift, write_characteristics, Characteristic, SurfaceMesh, SurfaceOptions,
};

#[derive(Debug, Parser)]
#[command(
    name = "lightlike",
    version,
    about = "Light-like extremal surfaces by characteristics and geodesics"
)]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for characteristic integration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Solve even when the initial data fail validation.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check light-likeness and monotonicity of the initial data.
    Validate,
    /// Integrate the characteristics and export the surface mesh.
    Solve {
        /// Also write the per-characteristic table to this CSV file.
        #[arg(long)]
        dump_characteristics: Option<PathBuf>,
    },
    /// Solve and compare against the closed-form reference in `[oracle]`.
    Compare,
    /// Print the cubic coefficients, roots and case along the data.
    Classify {
        /// Number of ϑ samples.
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Tabulate a closed-form reference solution as CSV `t,tau,r,alpha,beta`.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Data family: 1 radial null, 2 constant radius, 3 tilted strip.
    #[arg(long)]
    pub example: u8,
    /// `auto`, a case number (1, 2, 3 or I, II, III) or a case name.
    #[arg(long, default_value = "auto")]
    pub case: String,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long)]
    pub r0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub r1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau0: f64,
    /// Expression in `theta` (family 1) or a constant (family 2).
    #[arg(long, default_value = "pi/2", allow_hyphen_values = true)]
    pub alpha0: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta0: f64,
    /// Expression `f(theta)` for family 2.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sign: f64,
    /// Characteristic to tabulate.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub vartheta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Number of intervals in `[0, t_end]`.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

/// Maps an error to its exit status.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::OracleMismatch(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    run(&cli, out, err)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(cli, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Command::Oracle(args) = &cli.command {
        return cmd_oracle(args, out);
    }
    let path = cli.config.as_ref().ok_or_else(|| Error::Config {
        path: "--config".into(),
        message: "this command needs a configuration file".into(),
    })?;
    let cfg = load_config(path)?;
    match &cli.command {
        Command::Validate => cmd_validate(&cfg, out),
        Command::Solve {
            dump_characteristics,
        } => cmd_solve(&cfg, cli.force, dump_characteristics.as_deref(), out),
        Command::Compare => cmd_compare(&cfg, cli.force, out),
        Command::Classify { points } => cmd_classify(&cfg, *points, out),
        Command::Oracle(_) => unreachable!("handled above"),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e)
}

/// Light-likeness and monotonicity over the sample grid; 0 iff both pass.
pub fn cmd_validate(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let st = cfg.spacetime()?;
    let curve = cfg.initial_curve()?;
    let grid = cfg.sample_grid(&curve);
    let rep = validate(&curve, st.as_ref(), &grid, &cfg.tolerances())?;
    let tol = cfg.tolerances();
    writeln!(out, "spacetime: {}", st.name()).map_err(io)?;
    writeln!(out, "samples: {}", grid.len()).map_err(io)?;
    writeln!(
        out,
        "max |delta(0, vartheta)| = {:.3e} at vartheta = {} (tolerance {:.1e}): {}",
        rep.max_abs_delta,
        rep.max_delta_at,
        tol.eps_delta,
        pass(rep.max_abs_delta <= tol.eps_delta)
    )
    .map_err(io)?;
    writeln!(
        out,
        "min lambda' estimate = {:.6e} on [{}, {}]: {}",
        rep.monotone.min_slope,
        rep.monotone.min_at.0,
        rep.monotone.min_at.1,
        pass(rep.monotone.passed)
    )
    .map_err(io)?;
    if rep.monotone.flat_intervals > 0 {
        writeln!(
            out,
            "note: lambda is flat on {} interval(s)",
            rep.monotone.flat_intervals
        )
        .map_err(io)?;
    }
    if let Some(d) = rep.periodic_mismatch {
        writeln!(
            out,
            "periodic endpoint mismatch = {d:.3e}: {}",
            pass(d <= 1e-12)
        )
        .map_err(io)?;
    }
    writeln!(out, "result: {}", pass(rep.passed)).map_err(io)?;
    Ok(if rep.passed { 0 } else { 1 })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Everything a solve produces.
pub struct Solution {
    pub spacetime: Arc<dyn Spacetime>,
    pub curve: Arc<InitialCurve>,
    pub map: CharacteristicMap,
    pub characteristics: Vec<Characteristic>,
    pub mesh: SurfaceMesh,
}

/// Runs the full pipeline for `cfg`: characteristic map, geodesics, mesh.
pub fn solve(cfg: &RunConfig) -> Result<Solution> {
    let st = cfg.spacetime()?;
    let curve = Arc::new(cfg.initial_curve()?);
    let tol = cfg.tolerances();
    let map = CharacteristicMap::from_curve(curve.clone(), st.clone(), tol.eps_g11)?
        .certify(cfg.initial_data.samples.max(256), tol.eps_mono);
    let grid = characteristic_grid(&curve, cfg.solver.characteristics);
    let chars = integrate_characteristics(
        st.as_ref(),
        &curve,
        &map,
        &grid,
        cfg.solver.t_end,
        &cfg.solver_options(),
        cfg.solver.velocity_lift,
    )?;
    let opts = SurfaceOptions {
        eps_delta: tol.eps_delta,
        period_shift: curve.periodic.then(|| period_shift(&curve)),
    };
    let mesh = build_surface(
        st.as_ref(),
        &chars,
        &map,
        &cfg.t_grid(),
        &cfg.theta_grid(&curve),
        &opts,
    )?;
    Ok(Solution {
        spacetime: st,
        curve,
        map,
        characteristics: chars,
        mesh,
    })
}

fn check_first(cfg: &RunConfig, force: bool, out: &mut dyn Write) -> Result<bool> {
    if force {
        return Ok(true);
    }
    let st = cfg.spacetime()?;
    let curve = cfg.initial_curve()?;
    let rep = validate(
        &curve,
        st.as_ref(),
        &cfg.sample_grid(&curve),
        &cfg.tolerances(),
    )?;
    if !rep.passed {
        writeln!(
            out,
            "initial data failed validation (max |delta| = {:.3e}, min lambda' = {:.3e}); rerun with --force to solve anyway",
            rep.max_abs_delta, rep.monotone.min_slope
        )
        .map_err(io)?;
    }
    Ok(rep.passed)
}

fn event_summary(chars: &[Characteristic]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for c in chars {
        for e in &c.trajectory.events {
            *counts.entry(e.kind.to_string()).or_insert(0) += 1;
        }
    }
    counts
}

fn has_step_failure(chars: &[Characteristic]) -> bool {
    chars.iter().any(|c| {
        c.trajectory
            .events
            .iter()
            .any(|e| e.kind == EventKind::StepFailure)
    })
}

/// Solves, writes the mesh, and reports drift and `max |Δ|`.
pub fn cmd_solve(
    cfg: &RunConfig,
    force: bool,
    dump: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    if !check_first(cfg, force, out)? {
        return Ok(1);
    }
    let sol = solve(cfg)?;
    if let Some(dir) = cfg
        .output
        .path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
    {
        std::fs::create_dir_all(dir)?;
    }
    export(&sol.mesh, cfg.output.format, &cfg.output.path)?;
    if let Some(p) = dump {
        let mut w = BufWriter::new(File::create(p)?);
        write_characteristics(&sol.characteristics, &sol.map, &mut w)?;
        w.flush()?;
    }
    report_solution(cfg, &sol, out)?;
    writeln!(out, "wrote {}", cfg.output.path.display()).map_err(io)?;
    if has_step_failure(&sol.characteristics) {
        writeln!(out, "result: FAIL (step failure)").map_err(io)?;
        return Ok(1);
    }
    Ok(0)
}

fn report_solution(cfg: &RunConfig, sol: &Solution, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "characteristics: {}", sol.characteristics.len()).map_err(io)?;
    if let Some(tm) = sol.map.t_max() {
        let note = if tm <= cfg.solver.t_end {
            " (mesh truncated beyond it)"
        } else {
            ""
        };
        writeln!(out, "characteristic map certified for t < {tm:.6e}{note}").map_err(io)?;
    }
    for (kind, n) in event_summary(&sol.characteristics) {
        writeln!(out, "warning: {n} {kind} event(s)").map_err(io)?;
    }
    if let Some(m) = sol.spacetime.mass() {
        let params = SchwarzschildParams::new(m)?;
        let mut worst = [0.0f64; 4];
        for c in &sol.characteristics {
            let d = conserved_along(params, &c.trajectory);
            for (w, q) in worst.iter_mut().zip([d.e, d.l, d.k, d.c]) {
                *w = w.max(q.relative);
            }
        }
        writeln!(
            out,
            "conserved drift (max relative): E {:.3e}  L {:.3e}  K {:.3e}  C {:.3e}",
            worst[0], worst[1], worst[2], worst[3]
        )
        .map_err(io)?;
    }
    let rep = delta_monitor(&sol.mesh);
    writeln!(
        out,
        "max |delta| = {:.3e} at (t, theta) = ({}, {}) over {} node(s)",
        rep.max_abs_delta, rep.at.0, rep.at.1, rep.nodes
    )
    .map_err(io)?;
    writeln!(
        out,
        "types: lightlike {}  timelike {}  spacelike {}  truncated {}",
        rep.lightlike, rep.timelike, rep.spacelike, rep.truncated
    )
    .map_err(io)?;
    Ok(())
}

/// Error statistics of one compared quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub max: f64,
    pub median: f64,
    pub count: usize,
}

impl ErrorStats {
    pub fn from_samples(mut v: Vec<f64>) -> Self {
        if v.is_empty() {
            return Self {
                max: 0.0,
                median: 0.0,
                count: 0,
            };
        }
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Self {
            max: v[n - 1],
            median,
            count: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// `tau`, `r`, `alpha`, `beta`, then `relation`.
    pub rows: Vec<(&'static str, ErrorStats)>,
}

impl Comparison {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(|r| r.1.max).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<ErrorStats> {
        self.rows.iter().find(|r| r.0 == name).map(|r| r.1)
    }
}

/// Largest difference between the oracle's initial data and the configured
/// data on the sample grid.
pub fn data_mismatch(oracle: &OracleSolution, curve: &InitialCurve, grid: &[f64]) -> Result<f64> {
    let reference = oracle.initial_curve(curve.domain)?;
    let mut worst = 0.0f64;
    for &v in grid {
        let (p, q) = (curve.phi(v), reference.phi(v));
        let (a, b) = (curve.psi(v), reference.psi(v));
        for i in 0..DIM {
            worst = worst.max((p[i] - q[i]).abs()).max((a[i] - b[i]).abs());
        }
    }
    Ok(worst)
}

/// Oracle against integrated characteristics at every output time each one
/// reaches.
pub fn compare_characteristics(
    oracle: &OracleSolution,
    chars: &[Characteristic],
    t_grid: &[f64],
) -> Result<Comparison> {
    let mut errs: [Vec<f64>; DIM + 1] = Default::default();
    for c in chars {
        let ts: Vec<f64> = t_grid
            .iter()
            .copied()
            .filter(|&t| c.trajectory.covers(t))
            .collect();
        if ts.is_empty() {
            continue;
        }
        let exact = oracle.sample(c.vartheta, &ts)?;
        for (t, ex) in ts.iter().zip(&exact) {
            let y = c.trajectory.state_at(*t).expect("covered").y;
            errs[0].push((y[0] - ex.y[0]).abs());
            errs[1].push((y[1] - ex.y[1]).abs());
            errs[2].push(angle_difference(y[2], ex.y[2]).abs());
            errs[3].push(angle_difference(y[3], ex.y[3]).abs());
            errs[4].push(oracle.relation_residual(*t, c.vartheta, &y)?.abs());
        }
    }
    let names = ["tau", "r", "alpha", "beta", "relation"];
    Ok(Comparison {
        rows: names
            .iter()
            .zip(errs)
            .map(|(n, v)| (*n, ErrorStats::from_samples(v)))
            .collect(),
    })
}

/// Solves and compares against the configured oracle; 0 iff every error is
/// below `compare.tol`.
pub fn cmd_compare(cfg: &RunConfig, force: bool, out: &mut dyn Write) -> Result<i32> {
    let oracle = cfg.oracle()?.ok_or_else(|| Error::Config {
        path: "oracle".into(),
        message: "compare needs an [oracle] block".into(),
    })?;
    let curve = cfg.initial_curve()?;
    let mismatch = data_mismatch(&oracle, &curve, &cfg.sample_grid(&curve))?;
    if mismatch > cfg.compare.data_tol {
        return Err(Error::OracleMismatch(format!(
            "oracle {} data differ from initial_data by {mismatch:.3e} (compare.data_tol = {:.1e})",
            oracle.kind(),
            cfg.compare.data_tol
        )));
    }
    if !check_first(cfg, force, out)? {
        return Ok(1);
    }
    let sol = solve(cfg)?;
    let cmp = compare_characteristics(&oracle, &sol.characteristics, &cfg.t_grid())?;
    writeln!(
        out,
        "oracle: {} (family {}, case {})",
        oracle.kind(),
        oracle.kind().family(),
        oracle.kind().case_number()
    )
    .map_err(io)?;
    writeln!(
        out,
        "{:<10} {:>12} {:>12} {:>8}",
        "quantity", "max", "median", "points"
    )
    .map_err(io)?;
    for (name, s) in &cmp.rows {
        writeln!(
            out,
            "{name:<10} {:>12.3e} {:>12.3e} {:>8}",
            s.max, s.median, s.count
        )
        .map_err(io)?;
    }
    let ok = cmp.max_error() <= cfg.compare.tol;
    writeln!(
        out,
        "max error {:.3e} vs tol {:.1e}: {}",
        cmp.max_error(),
        cfg.compare.tol,
        pass(ok)
    )
    .map_err(io)?;
    Ok(if ok { 0 } else { 1 })
}

/// Cubic coefficients, roots, case and `k²` at `points` values of ϑ.
pub fn cmd_classify(cfg: &RunConfig, points: usize, out: &mut dyn Write) -> Result<i32> {
    let m = cfg.mass().ok_or_else(|| Error::Config {
        path: "spacetime.type".into(),
        message: "classify needs a Schwarzschild spacetime".into(),
    })?;
    let params = SchwarzschildParams::new(m)?;
    let curve = cfg.initial_curve()?;
    for v in uniform_grid(curve.domain, points.max(1)) {
        match CubicProfile::from_data(&curve, params, v) {
            Ok(p) => {
                let roots: Vec<String> = p.roots.iter().map(|r| format!("{r:.12e}")).collect();
                let k2 = p
                    .k_squared()
                    .map(|k| format!("{k:.12e}"))
                    .unwrap_or_else(|| "-".into());
                writeln!(
                    out,
                    "vartheta = {v}: A = {:.12e}  B = {:.12e}  roots = [{}]  case = {}  k^2 = {k2}",
                    p.a,
                    p.b,
                    roots.join(", "),
                    p.case_label
                )
                .map_err(io)?;
            }
            Err(e) => writeln!(out, "vartheta = {v}: {e}").map_err(io)?,
        }
    }
    Ok(0)
}

/// Builds the closed-form solution described by command-line parameters.
pub fn oracle_from_args(a: &OracleArgs) -> Result<OracleSolution> {
    let consts = [("m".to_string(), a.m)].into_iter().collect();
    let sol = match a.example {
        1 => OracleSolution::RadialNull(RadialNull::new(
            a.m,
            a.r0,
            a.r1,
            a.tau0,
            CurveComponent::expr(&a.alpha0, &consts)?,
            a.sign,
        )?),
        2 => {
            let alpha0 = CurveComponent::expr(&a.alpha0, &consts)?.value(0.0);
            let f = CurveComponent::expr(&a.f, &consts)?;
            OracleSolution::StaticStart(StaticStart::new(a.m, a.r0, a.tau0, alpha0, f, a.sign)?)
        }
        3 => OracleSolution::TiltedStart(TiltedStart::new(a.m, a.r0, a.beta0, a.sign)?),
        n => {
            return Err(Error::Config {
                path: "--example".into(),
                message: format!("must be 1, 2 or 3, got {n}"),
            })
        }
    };
    let req: CaseRequest = a.case.parse().map_err(|e: Error| Error::Config {
        path: "--case".into(),
        message: e.to_string(),
    })?;
    req.check(sol.kind())?;
    Ok(sol)
}

/// Samples the oracle on `[0, t_end]`; a branch that ends early (at the
/// horizon) yields the times before its end.
pub fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let sol = oracle_from_args(a)?;
    if !(a.t_end > 0.0) || a.steps == 0 {
        return Err(Error::Config {
            path: "--t-end".into(),
            message: "need t_end > 0 and steps > 0".into(),
        });
    }
    let ts = uniform_grid((0.0, a.t_end), a.steps + 1);
    let states = match sol.sample(a.vartheta, &ts) {
        Ok(s) => s,
        Err(Error::BranchRange(_) | Error::Horizon { .. }) => {
            // Longest prefix the branch reaches.
            let (mut lo, mut hi) = (1usize, ts.len());
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if sol.sample(a.vartheta, &ts[..mid]).is_ok() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            sol.sample(a.vartheta, &ts[..lo])?
        }
        Err(e) => return Err(e),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "tau", "r", "alpha", "beta"])?;
    for s in &states {
        let mut rec = vec![format!("{:.16e}", s.t)];
        rec.extend(s.y.iter().map(|x| format!("{x:.16e}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(0)
}
