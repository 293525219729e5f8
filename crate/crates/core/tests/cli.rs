mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use lightlike::cli::run_from_args;
use lightlike::surface::{import, ExportFormat, CSV_HEADER};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn lightlike(args: &[&str]) -> Output {
    let mut argv = vec!["lightlike"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_from_args(argv, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// Copies a shipped config into `dir`, applying textual replacements, so that
/// relative output paths land in the temporary directory.
fn staged(dir: &Path, name: &str, edits: &[(&str, &str)]) -> PathBuf {
    let mut text = std::fs::read_to_string(common::config_dir().join(name)).unwrap();
    for (from, to) in edits {
        assert!(text.contains(from), "{name} has no `{from}`");
        text = text.replace(from, to);
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn cfg(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_passes_on_light_like_data() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "radial_null.toml",
        "photon_sphere.toml",
        "tilted_circular.toml",
        "flat_ring.toml",
    ] {
        let p = staged(dir.path(), name, &[]);
        let o = lightlike(&["--config", cfg(&p), "validate"]);
        assert_eq!(o.code, 0, "{name}: {}{}", o.out, o.err);
        assert!(o.out.contains("result: pass"));
    }
}

#[test]
fn validate_fails_on_time_like_and_crossing_data() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "timelike.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "validate"]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("result: FAIL"));

    let p = staged(dir.path(), "decreasing_lambda.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "validate"]);
    assert_eq!(o.code, 1);
    assert!(o.out.contains("min lambda' estimate = -1"), "{}", o.out);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "missing_mass.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "validate"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("spacetime.mass"), "{}", o.err);

    let p = staged(
        dir.path(),
        "radial_null.toml",
        &[("t_end = 20.0", "t_end = \"long\"")],
    );
    let o = lightlike(&["--config", cfg(&p), "solve"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("solver.t_end"), "{}", o.err);

    let p = staged(
        dir.path(),
        "radial_null.toml",
        &[("characteristics = 32", "characteristic = 32")],
    );
    let o = lightlike(&["--config", cfg(&p), "validate"]);
    assert_eq!(o.code, 2);
    assert!(o.err.contains("solver"), "{}", o.err);

    let o = lightlike(&["--config", "/nonexistent/run.toml", "validate"]);
    assert_ne!(o.code, 0);
    let o = lightlike(&["validate"]);
    assert_eq!(o.code, 2);
}

#[test]
fn compare_rejects_an_oracle_for_other_data() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(
        dir.path(),
        "photon_sphere.toml",
        &[("case = \"1\"", "case = \"1\"\nmass = 2.0")],
    );
    let o = lightlike(&["--config", cfg(&p), "compare"]);
    assert_eq!(o.code, 2, "{}{}", o.out, o.err);

    let p = staged(
        dir.path(),
        "tilted_outer.toml",
        &[("r0 = 10.0\n\n[compare]", "r0 = 12.0\n\n[compare]")],
    );
    let o = lightlike(&["--config", cfg(&p), "compare"]);
    assert_eq!(o.code, 2, "{}{}", o.out, o.err);

    let p = staged(
        dir.path(),
        "photon_sphere.toml",
        &[("case = \"1\"", "case = \"3\"")],
    );
    let o = lightlike(&["--config", cfg(&p), "compare"]);
    assert_eq!(o.code, 2, "{}{}", o.out, o.err);
}

#[test]
fn compare_agrees_with_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "radial_null.toml",
        "photon_sphere.toml",
        "tilted_circular.toml",
    ] {
        let p = staged(dir.path(), name, &[]);
        let o = lightlike(&["--config", cfg(&p), "compare"]);
        assert_eq!(o.code, 0, "{name}: {}{}", o.out, o.err);
        for row in ["tau", "r", "alpha", "beta", "relation"] {
            assert!(
                o.out.lines().any(|l| l.starts_with(row)),
                "{name}: no {row} row"
            );
        }
    }
}

#[test]
fn compare_fails_when_the_tolerance_is_unreachable() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(
        dir.path(),
        "tilted_outer.toml",
        &[("tol = 1e-6", "tol = 1e-15")],
    );
    let o = lightlike(&["--config", cfg(&p), "compare"]);
    assert_eq!(o.code, 1, "{}", o.out);
}

#[test]
fn solve_writes_the_documented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "photon_sphere.toml", &[]);
    let dump = dir.path().join("chars.csv");
    let o = lightlike(&[
        "--config",
        cfg(&p),
        "solve",
        "--dump-characteristics",
        cfg(&dump),
    ]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
    assert!(o.out.contains("max |delta|"));
    assert!(o.out.contains("conserved drift"));

    let mesh = dir.path().join("out/photon_sphere.csv");
    let text = std::fs::read_to_string(&mesh).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text.lines().count(), 1 + 21 * 25);
    let table = import(ExportFormat::Csv, &mesh).unwrap();
    assert!(table.flat_rows().all(|r| r.type_label == "lightlike"));

    let chars = std::fs::read_to_string(&dump).unwrap();
    assert!(chars.starts_with("t,theta,vartheta,lambda,jacobian,tau,r,alpha,beta,event"));
}

#[test]
fn solve_refuses_invalid_data_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "timelike.toml", &[]);
    let mesh = dir.path().join("out/timelike.csv");
    let o = lightlike(&["--config", cfg(&p), "solve"]);
    assert_eq!(o.code, 1);
    assert!(!mesh.exists());

    let o = lightlike(&["--force", "--config", cfg(&p), "solve"]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
    let table = import(ExportFormat::Csv, &mesh).unwrap();
    assert!(table.flat_rows().all(|r| r.type_label == "timelike"));
}

#[test]
fn near_horizon_run_records_events_and_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "near_horizon.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "solve"]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
    assert!(o.out.contains("horizon event"), "{}", o.out);
    let table = import(ExportFormat::Csv, &dir.path().join("out/near_horizon.csv")).unwrap();
    let truncated = table.flat_rows().filter(|r| r.is_truncated()).count();
    assert!(truncated > 0);
    assert!(table
        .flat_rows()
        .filter(|r| r.is_truncated())
        .all(|r| r.r.is_none()));
}

#[test]
fn periodic_ring_exports_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "flat_ring.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "solve"]);
    assert_eq!(o.code, 0, "{}{}", o.out, o.err);
    let table = import(ExportFormat::Json, &dir.path().join("out/flat_ring.json")).unwrap();
    for row in table.flat_rows() {
        assert!((row.r.unwrap() - (10.0 + row.t)).abs() < 1e-8);
    }
}

#[test]
fn classify_reports_the_double_root_on_the_photon_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "photon_sphere.toml", &[]);
    let o = lightlike(&["--config", cfg(&p), "classify", "--points", "3"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(o.out.lines().count(), 3);
    assert!(
        o.out.lines().all(|l| l.contains("case = double_root")),
        "{}",
        o.out
    );
}

#[test]
fn oracle_subcommand_tabulates_the_photon_sphere() {
    let o = lightlike(&[
        "oracle",
        "--example",
        "2",
        "--r0",
        "3",
        "--t-end",
        "5",
        "--steps",
        "10",
    ]);
    assert_eq!(o.code, 0, "{}", o.err);
    let mut lines = o.out.lines();
    assert_eq!(lines.next().unwrap(), "t,tau,r,alpha,beta");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for r in rows {
        assert!((r[2] - 3.0).abs() < 1e-12);
        assert!((r[3] - std::f64::consts::FRAC_PI_2 - r[0] / 27f64.sqrt()).abs() < 1e-12);
    }
    let o = lightlike(&["oracle", "--example", "2", "--r0", "3", "--case", "3"]);
    assert_eq!(o.code, 2);
    let o = lightlike(&["oracle", "--example", "7", "--r0", "3"]);
    assert_eq!(o.code, 2);
}

#[test]
fn environment_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let p = staged(dir.path(), "missing_mass.toml", &[]);
    let out = Command::new(env!("CARGO_BIN_EXE_lightlike"))
        .args(["--config", cfg(&p), "validate"])
        .env("LIGHTLIKE_SPACETIME__MASS", "1.0")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = staged(dir.path(), name, &[]);
        Command::new(env!("CARGO_BIN_EXE_lightlike"))
            .args(["--config", cfg(&p), "validate"])
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("radial_null.toml"), Some(0));
    assert_eq!(run("timelike.toml"), Some(1));
    assert_eq!(run("missing_mass.toml"), Some(2));
}
