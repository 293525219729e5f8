#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use lightlike::geodesic::GeodesicState;
use lightlike::surface::{characteristic_grid, Characteristic, SurfaceOptions};
use lightlike::{
    build_surface, integrate_characteristics, CharacteristicMap, InitialCurve, Schwarzschild,
    SolverOptions, Spacetime, SurfaceMesh, VelocityLift,
};

pub fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

pub fn schwarzschild(m: f64) -> Arc<Schwarzschild> {
    Arc::new(Schwarzschild::new(m).unwrap())
}

pub fn curve(
    phi: [&str; 4],
    psi: [&str; 4],
    constants: &[(&str, f64)],
    domain: (f64, f64),
) -> Arc<InitialCurve> {
    let c: HashMap<String, f64> = constants.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Arc::new(InitialCurve::from_exprs(phi, psi, &c, domain, false).unwrap())
}

/// Radially outgoing strip `r = t + r0` with `m = 1`, `r0 = 10`, `r1 = 1`.
pub fn radial_curve(domain: (f64, f64)) -> Arc<InitialCurve> {
    curve(
        ["0", "r0", "1.2 + 0.3*sin(theta)", "theta"],
        ["r1/(1 - 2*m/r0)", "r1", "0", "0"],
        &[("m", 1.0), ("r0", 10.0), ("r1", 1.0)],
        domain,
    )
}

/// Constant-radius start with `f(ϑ)` given as an expression.
pub fn static_curve(
    m: f64,
    r0: f64,
    alpha0: f64,
    f: &str,
    domain: (f64, f64),
) -> Arc<InitialCurve> {
    let w = format!("({f})*sqrt(r0*(r0 - 2*m))/r0^2");
    curve(
        ["0", "r0", "a0", "theta"],
        [f, "0", &w, "0"],
        &[("m", m), ("r0", r0), ("a0", alpha0)],
        domain,
    )
}

/// Tilted strip `φ = (ϑ, r0, wϑ, 0)`, `ψ = φ'`.
pub fn tilted_curve(m: f64, r0: f64, domain: (f64, f64)) -> Arc<InitialCurve> {
    let w = (2.0 * m * (r0 - 2.0 * m)).sqrt() / (r0 * r0);
    curve(
        ["theta", "r0", "w*theta", "0"],
        ["1", "0", "w", "0"],
        &[("r0", r0), ("w", w)],
        domain,
    )
}

pub struct Run<S: Spacetime> {
    pub spacetime: Arc<S>,
    pub curve: Arc<InitialCurve>,
    pub map: CharacteristicMap,
    pub chars: Vec<Characteristic>,
}

pub fn run<S: Spacetime + 'static>(
    spacetime: Arc<S>,
    curve: Arc<InitialCurve>,
    n: usize,
    t_end: f64,
    opts: &SolverOptions,
) -> Run<S> {
    let map = CharacteristicMap::from_curve(curve.clone(), spacetime.clone(), 1e-12)
        .unwrap()
        .certify(256, 1e-10);
    let grid = characteristic_grid(&curve, n);
    let chars = integrate_characteristics(
        spacetime.as_ref(),
        &curve,
        &map,
        &grid,
        t_end,
        opts,
        VelocityLift::AsGiven,
    )
    .unwrap();
    Run {
        spacetime,
        curve,
        map,
        chars,
    }
}

impl<S: Spacetime> Run<S> {
    pub fn mesh(&self, t_grid: &[f64], theta_grid: &[f64]) -> SurfaceMesh {
        build_surface(
            self.spacetime.as_ref(),
            &self.chars,
            &self.map,
            t_grid,
            theta_grid,
            &SurfaceOptions::default(),
        )
        .unwrap()
    }

    /// Every accepted step plus dense samples every `dt`.
    pub fn states(&self, dt: f64) -> Vec<(f64, GeodesicState)> {
        let mut out = Vec::new();
        for c in &self.chars {
            out.extend(c.trajectory.states.iter().map(|s| (c.vartheta, *s)));
            let mut t = 0.0;
            while let Some(s) = c.trajectory.state_at(t) {
                out.push((c.vartheta, s));
                t += dt;
            }
        }
        out
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// First integrals `(E, L, K, C)` of a Schwarzschild geodesic written out
/// directly from the metric.
pub fn integrals(m: f64, y: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
    let r = y[1];
    let f = 1.0 - 2.0 * m / r;
    let (s, c) = y[2].sin_cos();
    let e = f * v[0];
    let l = r * r * s * s * v[3];
    let k = r.powi(4) * v[2] * v[2] + l * l * c * c / (s * s);
    let cc = (v[1] * v[1] - 2.0 * m * e * e / r) / f + k / (r * r);
    [e, l, k, cc]
}

pub fn tangent_norm(m: f64, y: &[f64; 4], v: &[f64; 4]) -> f64 {
    let r = y[1];
    let f = 1.0 - 2.0 * m / r;
    let s = y[2].sin();
    -f * v[0] * v[0] + v[1] * v[1] / f + r * r * v[2] * v[2] + r * r * s * s * v[3] * v[3]
}
