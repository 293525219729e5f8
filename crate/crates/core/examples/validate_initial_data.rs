//! Validation of initial strips: light-like data pass; a static string is
//! time-like; a decreasing Λ makes characteristics cross.

use lightlike::initial_data::uniform_grid;
use lightlike::{validate, InitialCurve, Schwarzschild, Tolerances};

fn main() -> lightlike::Result<()> {
    let st = Schwarzschild::new(1.0)?;
    let cases = [
        (
            "radial null",
            ["0", "10", "pi/2", "theta"],
            ["1/(1 - 2/10)", "1", "0", "0"],
        ),
        (
            "static string",
            ["0", "10", "pi/2", "theta"],
            ["1", "0", "0", "0"],
        ),
        (
            "crossing",
            ["0", "10", "pi/2", "theta"],
            ["0", "0", "0", "theta"],
        ),
    ];
    for (name, phi, psi) in cases {
        let curve = InitialCurve::from_exprs(phi, psi, &Default::default(), (0.5, 2.0), false)?;
        let rep = validate(
            &curve,
            &st,
            &uniform_grid(curve.domain, 64),
            &Tolerances::default(),
        )?;
        println!(
            "{name:14} max |delta| = {:.3e}  min lambda' = {:+.3e}  passed = {}",
            rep.max_abs_delta, rep.monotone.min_slope, rep.passed
        );
    }
    Ok(())
}
