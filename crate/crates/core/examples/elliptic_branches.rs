//! Tilted strips off the circular orbit r = 4m: outside, r oscillates along
//! a cosine-type branch; inside, it falls along a secant-type branch until
//! the horizon. Integrated curves are checked against the closed forms.

use lightlike::geodesic::GeodesicState;
use lightlike::oracles::examples::TiltedStart;
use lightlike::{integrate, OracleSolution, Schwarzschild, SolverOptions, VelocityLift};

fn main() -> lightlike::Result<()> {
    let st = Schwarzschild::new(1.0)?;
    for (r0, vartheta) in [(10.0, 10.0), (3.0, 5.0)] {
        let tilted = TiltedStart::new(1.0, r0, 0.0, 1.0)?;
        let branch = tilted.branch(vartheta)?;
        let oracle = OracleSolution::TiltedStart(tilted);
        println!(
            "r0 = {r0}: {} with k^2 = {:.6}",
            oracle.kind(),
            branch.k_squared()
        );

        let curve = oracle.initial_curve((vartheta - 1.0, vartheta + 1.0))?;
        let start = GeodesicState::from_curve(&curve, vartheta, 0.0, VelocityLift::AsGiven);
        let traj = integrate(&st, start, 30.0, &SolverOptions::default())?;
        if let Some(e) = traj.termination() {
            println!("  stopped: {} at t = {:.6}", e.kind, e.t);
        }
        let ts: Vec<f64> = (1..=6).map(|i| i as f64 * traj.t_last() / 6.0).collect();
        let exact = oracle.sample(vartheta, &ts[..5])?;
        for (t, ex) in ts.iter().zip(&exact) {
            let y = traj.state_at(*t).unwrap().y;
            println!(
                "  t {t:8.4}: r = {:.10} (closed form {:.10}), relation residual {:.1e}",
                y[1],
                ex.y[1],
                oracle.relation_residual(*t, vartheta, &y)?
            );
        }
    }
    Ok(())
}
