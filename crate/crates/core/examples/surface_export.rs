//! An expanding light-like ring in flat space, periodic in ϑ, exported as
//! CSV and JSON and read back.

use std::sync::Arc;

use lightlike::surface::{
    characteristic_grid, export, import, period_shift, ExportFormat, MeshTable, SurfaceOptions,
};
use lightlike::{
    build_surface, integrate_characteristics, CharacteristicMap, InitialCurve, MinkowskiSpherical,
    SolverOptions, VelocityLift,
};

fn main() -> lightlike::Result<()> {
    let st = Arc::new(MinkowskiSpherical::default());
    let curve = Arc::new(InitialCurve::from_exprs(
        ["0", "10", "pi/2", "theta"],
        ["1", "1", "0", "0"],
        &Default::default(),
        (0.0, std::f64::consts::TAU),
        true,
    )?);
    let map = CharacteristicMap::from_curve(curve.clone(), st.clone(), 1e-12)?;
    let chars = integrate_characteristics(
        st.as_ref(),
        &curve,
        &map,
        &characteristic_grid(&curve, 48),
        5.0,
        &SolverOptions::default(),
        VelocityLift::AsGiven,
    )?;
    let opts = SurfaceOptions {
        period_shift: Some(period_shift(&curve)),
        ..Default::default()
    };
    let thetas: Vec<f64> = (0..8).map(|j| j as f64 * 0.8).collect();
    let mesh = build_surface(st.as_ref(), &chars, &map, &[0.0, 2.5, 5.0], &thetas, &opts)?;

    let dir = std::env::temp_dir().join("lightlike-surface-export");
    std::fs::create_dir_all(&dir)?;
    for (format, name) in [
        (ExportFormat::Csv, "ring.csv"),
        (ExportFormat::Json, "ring.json"),
    ] {
        let path = dir.join(name);
        export(&mesh, format, &path)?;
        let back = import(format, &path)?;
        println!(
            "{}: {} rows, round trip exact: {}",
            path.display(),
            back.flat_rows().count(),
            back == MeshTable::from_mesh(&mesh)
        );
    }
    let table = MeshTable::from_mesh(&mesh);
    print!(
        "{}",
        table
            .to_string(ExportFormat::Csv)?
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );
    println!();
    Ok(())
}
