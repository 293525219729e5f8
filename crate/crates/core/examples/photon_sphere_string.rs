//! A string wound on the photon sphere r = 3m: each t-curve stays at r = 3
//! while α advances at rate f/(3√3). Compared with the closed form.

use std::f64::consts::FRAC_PI_2;

use lightlike::geodesic::GeodesicState;
use lightlike::oracles::examples::StaticStart;
use lightlike::{
    integrate, CurveComponent, OracleSolution, Schwarzschild, SolverOptions, VelocityLift,
};

fn main() -> lightlike::Result<()> {
    let st = Schwarzschild::new(1.0)?;
    let f = CurveComponent::expr("1 + 0.5*cos(theta)", &Default::default())?;
    let oracle = OracleSolution::StaticStart(StaticStart::new(1.0, 3.0, 0.0, FRAC_PI_2, f, 1.0)?);
    println!("case: {}", oracle.kind());
    let curve = oracle.initial_curve((0.0, 6.0))?;

    for vartheta in [0.0, 1.5, 3.0] {
        let start = GeodesicState::from_curve(&curve, vartheta, 0.0, VelocityLift::AsGiven);
        let traj = integrate(&st, start, 5.0, &SolverOptions::default())?;
        let ts = [1.0, 2.5, 5.0];
        let exact = oracle.sample(vartheta, &ts)?;
        for (t, ex) in ts.iter().zip(&exact) {
            let y = traj.state_at(*t).unwrap().y;
            println!(
                "vartheta {vartheta:.1} t {t:.1}: r = {:.12} alpha = {:.12} (closed form {:.12}), |dr| = {:.1e}",
                y[1],
                y[2],
                ex.y[2],
                (y[1] - ex.y[1]).abs()
            );
        }
    }
    Ok(())
}
