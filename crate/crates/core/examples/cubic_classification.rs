//! Roots of the radial cubic for a string released at rest at radius r0 and
//! the resulting case: inner branch, double root at r0 = 3m, outer branch.

use lightlike::reduction::{static_start_roots, CubicProfile};

fn main() -> lightlike::Result<()> {
    let m = 1.0;
    for r0 in [2.5f64, 3.0, 4.0, 10.0] {
        let b = (r0 - 2.0 * m) / r0.powi(3);
        let p = CubicProfile::new(m, 0.0, b, 1.0 / r0)?;
        let closed = static_start_roots(m, r0);
        println!(
            "r0 = {r0:4}: roots {:?}  closed form {:?}  case {}  k^2 {}",
            p.roots,
            closed,
            p.case_label,
            p.k_squared().map_or("-".into(), |k| format!("{k:.6}"))
        );
    }
    Ok(())
}
