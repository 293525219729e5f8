//! The characteristic transform θ = ϑ + Λ(ϑ)t for Λ = arctan ϑ: inversion,
//! Jacobian, and the Burgers residual λ_t + λλ_θ under refinement. A
//! decreasing Λ is only certified up to the crossing time.

use lightlike::CharacteristicMap;

fn main() -> lightlike::Result<()> {
    let map = CharacteristicMap::new(f64::atan, |v| 1.0 / (1.0 + v * v), (-5.0, 5.0), false)
        .certify(512, 1e-10);
    println!("t_max = {:?}", map.t_max());
    for (v, t) in [(-2.0, 1.0), (0.3, 4.0), (4.0, 10.0)] {
        let th = map.forward(v, t);
        println!(
            "vartheta {v:5}, t {t:5}: theta = {th:.12}, back = {:.15}, jacobian = {:.6}",
            map.invert(t, th)?,
            map.jacobian(t, v)?
        );
    }
    let ts = [0.5, 1.0, 2.0];
    let thetas = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut prev: Option<f64> = None;
    for h in [0.1, 0.05, 0.025, 0.0125] {
        let r = map.burgers_residual(&ts, &thetas, h)?;
        match prev {
            Some(p) => println!("h = {h:<7} residual {r:.3e}  order {:.3}", (p / r).log2()),
            None => println!("h = {h:<7} residual {r:.3e}"),
        }
        prev = Some(r);
    }

    let crossing = CharacteristicMap::new(|v| -v, |_| -1.0, (0.0, 2.0), false).certify(64, 1e-10);
    println!("Lambda = -vartheta: t_max = {:?}", crossing.t_max());
    println!(
        "invert past t_max: {:?}",
        crossing.invert(1.5, 0.2).err().map(|e| e.to_string())
    );
    Ok(())
}
