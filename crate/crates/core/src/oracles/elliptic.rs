//! Incomplete elliptic integral of the first kind
//! `F(χ, k) = ∫₀^χ dγ / √(1 − k² sin²γ)` through Carlson's `R_F`, and its
//! inverse (the Jacobi amplitude).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::roots::newton_bisect;

/// Carlson's symmetric integral
/// `R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z))`, by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x >= 0.0 && y >= 0.0 && z >= 0.0);
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let a = (x + y + z) / 3.0;
        let dx = 1.0 - x / a;
        let dy = 1.0 - y / a;
        let dz = 1.0 - z / a;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0
                - 3.0 * e2 * e3 / 44.0
                - 5.0 * e2 * e2 * e2 / 208.0
                + 3.0 * e3 * e3 / 104.0
                + e2 * e2 * e3 / 16.0)
                / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
}

fn check_modulus(k: f64) -> Result<f64> {
    let k2 = k * k;
    if !(k2 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "elliptic modulus must satisfy k² < 1, got k² = {k2}"
        )));
    }
    Ok(k2)
}

/// Complete integral `K(k) = F(π/2, k)`.
pub fn complete_k(k: f64) -> Result<f64> {
    let k2 = check_modulus(k)?;
    Ok(carlson_rf(0.0, 1.0 - k2, 1.0))
}

fn f_reduced(chi: f64, k2: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    s * carlson_rf(c * c, 1.0 - k2 * s * s, 1.0)
}

/// `F(χ, k)` for any real amplitude `χ`, using `F(χ + nπ) = F(χ) + 2nK`.
pub fn elliptic_f(chi: f64, k: f64) -> Result<f64> {
    let k2 = check_modulus(k)?;
    if !chi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be finite, got {chi}"
        )));
    }
    if chi.abs() <= FRAC_PI_2 {
        return Ok(f_reduced(chi, k2));
    }
    let n = (chi / PI).round();
    let rest = chi - n * PI;
    Ok(2.0 * n * carlson_rf(0.0, 1.0 - k2, 1.0) + f_reduced(rest, k2))
}

/// `dF/dχ = 1/√(1 − k² sin²χ)`.
pub fn elliptic_f_derivative(chi: f64, k: f64) -> f64 {
    let s = chi.sin();
    1.0 / (1.0 - k * k * s * s).sqrt()
}

/// The amplitude `χ` with `F(χ, k) = value`.
pub fn amplitude(value: f64, k: f64) -> Result<f64> {
    let big_k = complete_k(k)?;
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "F value must be finite, got {value}"
        )));
    }
    let n = (value / (2.0 * big_k)).round();
    let rest = value - 2.0 * n * big_k;
    let k2 = k * k;
    let chi = if rest == 0.0 {
        0.0
    } else {
        newton_bisect(
            |x| (f_reduced(x, k2) - rest, elliptic_f_derivative(x, k)),
            -FRAC_PI_2,
            FRAC_PI_2,
            1e-16,
            200,
        )?
    };
    Ok(n * PI + chi)
}
