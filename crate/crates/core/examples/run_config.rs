//! Runs a configuration file end to end (as `lightlike solve` does) and
//! prints the event counts and the Δ report.
//!
//! `cargo run --example run_config -- configs/tilted_circular.toml`

use std::path::PathBuf;

use lightlike::cli::solve;
use lightlike::config::load_config;
use lightlike::delta_monitor;

fn main() -> lightlike::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/tilted_circular.toml")
        });
    let cfg = load_config(&path)?;
    let sol = solve(&cfg)?;
    let stopped = sol
        .characteristics
        .iter()
        .filter(|c| c.ended_at().is_some())
        .count();
    println!(
        "{}: {} characteristics, {stopped} stopped early",
        path.display(),
        sol.characteristics.len()
    );
    let rep = delta_monitor(&sol.mesh);
    println!(
        "max |delta| = {:.3e}; lightlike {} timelike {} spacelike {} truncated {}",
        rep.max_abs_delta, rep.lightlike, rep.timelike, rep.spacelike, rep.truncated
    );
    Ok(())
}
