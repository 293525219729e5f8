//! Radially outgoing light-like surface in Schwarzschild, m = 1, r0 = 10.
//! Every t-curve is a radial null geodesic, so r = t + r0.

use std::collections::HashMap;
use std::sync::Arc;

use lightlike::surface::{characteristic_grid, SurfaceOptions};
use lightlike::{
    build_surface, delta_monitor, integrate_characteristics, CharacteristicMap, InitialCurve,
    Schwarzschild, SolverOptions, VelocityLift,
};

fn main() -> lightlike::Result<()> {
    let st = Arc::new(Schwarzschild::new(1.0)?);
    let constants = HashMap::from([
        ("r0".to_string(), 10.0),
        ("r1".to_string(), 1.0),
        ("m".to_string(), 1.0),
    ]);
    let curve = Arc::new(InitialCurve::from_exprs(
        ["0", "r0", "1.2 + 0.3*sin(theta)", "theta"],
        ["r1/(1 - 2*m/r0)", "r1", "0", "0"],
        &constants,
        (0.0, 6.0),
        false,
    )?);
    let map = CharacteristicMap::from_curve(curve.clone(), st.clone(), 1e-12)?.certify(256, 1e-10);
    let chars = integrate_characteristics(
        st.as_ref(),
        &curve,
        &map,
        &characteristic_grid(&curve, 32),
        20.0,
        &SolverOptions::default(),
        VelocityLift::AsGiven,
    )?;

    let worst = chars
        .iter()
        .flat_map(|c| c.trajectory.states.iter())
        .map(|s| (s.y[1] - s.t - 10.0).abs())
        .fold(0.0, f64::max);
    println!("32 characteristics, max |r - (t + 10)| = {worst:.3e}");

    let t_grid: Vec<f64> = (0..=10).map(|i| 2.0 * i as f64).collect();
    let theta_grid: Vec<f64> = (0..=12).map(|j| 0.5 * j as f64).collect();
    let mesh = build_surface(
        st.as_ref(),
        &chars,
        &map,
        &t_grid,
        &theta_grid,
        &SurfaceOptions::default(),
    )?;
    let rep = delta_monitor(&mesh);
    println!(
        "mesh {}x{}: max |delta| = {:.3e} at {:?}, lightlike {} of {}",
        t_grid.len(),
        theta_grid.len(),
        rep.max_abs_delta,
        rep.at,
        rep.lightlike,
        rep.nodes
    );
    let n = mesh.node(10, 6).expect("inside the computed region");
    println!("x(20, 3) = {:?}", n.x);
    Ok(())
}
