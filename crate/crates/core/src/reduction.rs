//! Reduction of a Schwarzschild geodesic with `L = 0` to the cubic
//! `(du/dα)² = g(u) = 2m u³ − u² + 2mA u + B`, `u = 1/r`, together with the
//! radial first integral and the quadratures that recover `t` and `τ`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::GeodesicState;
use crate::initial_data::{ConservedSet, InitialCurve};
use crate::quad;
use crate::spacetime::SchwarzschildParams;

/// Two roots closer than this are treated as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `u` starts on a double root and stays there (circular orbit).
    DoubleRoot,
    /// `u` starts on the largest root and increases (r decreases).
    InnerBranch,
    /// `u` starts on the middle root and decreases (r increases).
    OuterBranch,
    Generic,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::DoubleRoot => "double_root",
            CaseLabel::InnerBranch => "inner_branch",
            CaseLabel::OuterBranch => "outer_branch",
            CaseLabel::Generic => "generic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicProfile {
    pub m: f64,
    pub a: f64,
    pub b: f64,
    /// Initial value of `u`, used to place the motion among the roots.
    pub u0: f64,
    /// Real roots, largest first.
    pub roots: Vec<f64>,
    pub case_label: CaseLabel,
}

impl CubicProfile {
    pub fn new(m: f64, a: f64, b: f64, u0: f64) -> Result<Self> {
        if !(m > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::ProfileUndefined(format!(
                "need m > 0 and finite coefficients, got m = {m}, A = {a}, B = {b}"
            )));
        }
        let roots = solve_cubic(m, a, b);
        let case_label = classify(&roots, u0);
        Ok(Self {
            m,
            a,
            b,
            u0,
            roots,
            case_label,
        })
    }

    /// Profile of the characteristic through `ϑ`, from the initial strip.
    pub fn from_data(
        curve: &InitialCurve,
        params: SchwarzschildParams,
        vartheta: f64,
    ) -> Result<Self> {
        let (a, b) = cubic_coefficients(curve, params, vartheta)?;
        Self::new(params.m, a, b, 1.0 / curve.phi(vartheta)[1])
    }

    /// Profile from first integrals: `A = (E² − C)/K`, `B = C/K`.
    pub fn from_conserved(params: SchwarzschildParams, c: &ConservedSet, u0: f64) -> Result<Self> {
        if !(c.k > 0.0) {
            return Err(Error::ProfileUndefined(format!(
                "K = {} must be positive",
                c.k
            )));
        }
        Self::new(params.m, (c.e * c.e - c.c) / c.k, c.c / c.k, u0)
    }

    /// Coefficients of `g`, highest degree first.
    pub fn coeffs(&self) -> [f64; 4] {
        [2.0 * self.m, -1.0, 2.0 * self.m * self.a, self.b]
    }

    pub fn g(&self, u: f64) -> f64 {
        ((2.0 * self.m * u - 1.0) * u + 2.0 * self.m * self.a) * u + self.b
    }

    pub fn g_prime(&self, u: f64) -> f64 {
        (6.0 * self.m * u - 2.0) * u + 2.0 * self.m * self.a
    }

    /// Squared modulus of the elliptic integral for the inner and outer
    /// branches, `(u₂ − u₃)/(u₁ − u₃)` over the sorted roots.
    pub fn k_squared(&self) -> Option<f64> {
        match (self.case_label, self.roots.as_slice()) {
            (CaseLabel::InnerBranch | CaseLabel::OuterBranch, &[r1, r2, r3]) => {
                Some((r2 - r3) / (r1 - r3))
            }
            _ => None,
        }
    }

    /// Largest `|g(root)| / max(1, |B|)`.
    pub fn root_residual(&self) -> f64 {
        let scale = self.b.abs().max(1.0);
        self.roots
            .iter()
            .map(|&u| self.g(u).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// `A` and `B` of the cubic for the characteristic through `ϑ`.
///
/// Requires `φ₁ > 2m` and `ψ₂ ≠ 0`; the azimuthal data are assumed to vanish.
pub fn cubic_coefficients(
    curve: &InitialCurve,
    params: SchwarzschildParams,
    vartheta: f64,
) -> Result<(f64, f64)> {
    let m = params.m;
    let p = curve.phi(vartheta);
    let v = curve.psi(vartheta);
    let r = p[1];
    if !(r > 2.0 * m) {
        return Err(Error::Horizon { r, two_m: 2.0 * m });
    }
    if v[2] == 0.0 {
        return Err(Error::ProfileUndefined(format!(
            "ψ₂({vartheta}) = 0: the cubic in u needs a non-zero polar velocity"
        )));
    }
    let d = r - 2.0 * m;
    let (p0, p1, p2) = (v[0] * v[0], v[1] * v[1], v[2] * v[2]);
    let a = -1.0 / (r * r) + (d * d * p0 - r * r * p1) / (d * r.powi(5) * p2);
    let b = 1.0 / (r * r) + (-2.0 * m * d * d * p0 + r.powi(3) * p1) / (d * r.powi(6) * p2);
    Ok((a, b))
}

/// Real roots of `2m u³ − u² + 2mA u + B`, largest first.
///
/// Trigonometric form when all three roots are real, Cardano otherwise, each
/// root then polished by Newton steps that are kept only if they reduce `|g|`.
pub fn solve_cubic(m: f64, a: f64, b: f64) -> Vec<f64> {
    let g = |u: f64| ((2.0 * m * u - 1.0) * u + 2.0 * m * a) * u + b;
    let dg = |u: f64| (6.0 * m * u - 2.0) * u + 2.0 * m * a;

    // Monic form u³ + c2 u² + c1 u + c0.
    let c2 = -1.0 / (2.0 * m);
    let c1 = a;
    let c0 = b / (2.0 * m);
    let q = (3.0 * c1 - c2 * c2) / 9.0;
    let r = (9.0 * c2 * c1 - 27.0 * c0 - 2.0 * c2 * c2 * c2) / 54.0;
    let mut disc = q * q * q + r * r;
    let scale = (q * q * q).abs() + r * r;
    if disc > 0.0 && disc <= 1e-13 * scale {
        disc = 0.0;
    }
    let shift = c2 / 3.0;
    let mut roots = if disc <= 0.0 && q < 0.0 {
        let s = (-q).sqrt();
        let cos_arg = (r / (s * s * s)).clamp(-1.0, 1.0);
        let th = cos_arg.acos();
        (0..3)
            .map(|k| 2.0 * s * ((th + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() - shift)
            .collect::<Vec<_>>()
    } else if disc <= 0.0 {
        // q = 0 and r = 0: triple root.
        vec![-shift; 3]
    } else {
        let sd = disc.sqrt();
        vec![(r + sd).cbrt() + (r - sd).cbrt() - shift]
    };

    for u in roots.iter_mut() {
        for _ in 0..3 {
            let d = dg(*u);
            if d == 0.0 {
                break;
            }
            let next = *u - g(*u) / d;
            if next.is_finite() && g(next).abs() < g(*u).abs() {
                *u = next;
            } else {
                break;
            }
        }
    }

    // Near a double root the formulas above lose half the digits; the
    // critical points of g are simple roots of g' and can be found exactly.
    let crit_disc = 1.0 - 12.0 * m * m * a;
    if crit_disc >= 0.0 {
        let sq = crit_disc.sqrt();
        for uc in [(1.0 + sq) / (6.0 * m), (1.0 - sq) / (6.0 * m)] {
            let size =
                (2.0 * m * uc * uc * uc).abs() + uc * uc + (2.0 * m * a * uc).abs() + b.abs();
            if g(uc).abs() > 16.0 * f64::EPSILON * size {
                continue;
            }
            let close = |x: f64| (x - uc).abs() <= 1e-6 * (1.0 + uc.abs());
            if roots.len() == 1 {
                if !close(roots[0]) {
                    roots.extend([uc, uc]);
                }
            } else {
                let mut hits: Vec<usize> = (0..roots.len()).filter(|&i| close(roots[i])).collect();
                hits.sort_by(|&i, &j| (roots[i] - uc).abs().total_cmp(&(roots[j] - uc).abs()));
                for &i in hits.iter().take(2) {
                    roots[i] = uc;
                }
            }
        }
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

/// Places `u0` among the sorted roots.
pub fn classify(roots: &[f64], u0: f64) -> CaseLabel {
    let near = |x: f64, y: f64| (x - y).abs() <= DOUBLE_ROOT_TOL * (1.0 + y.abs());
    match *roots {
        [r1, r2, r3] => {
            let on_double = (near(r1, r2) && (near(u0, r1) || near(u0, r2)))
                || (near(r2, r3) && (near(u0, r2) || near(u0, r3)));
            if on_double {
                CaseLabel::DoubleRoot
            } else if near(u0, r1) {
                CaseLabel::InnerBranch
            } else if near(u0, r2) {
                CaseLabel::OuterBranch
            } else {
                CaseLabel::Generic
            }
        }
        _ => CaseLabel::Generic,
    }
}

/// Closed-form roots for a constant-radius start with no radial velocity and
/// `A = 0`, `B = (r₀ − 2m)/r₀³`: `1/r₀` and `(r₀ − 2m ± √((r₀−2m)(r₀+6m)))/(4m r₀)`.
pub fn static_start_roots(m: f64, r0: f64) -> [f64; 3] {
    let d = r0 - 2.0 * m;
    let s = (d * (r0 + 6.0 * m)).sqrt();
    [1.0 / r0, (d + s) / (4.0 * m * r0), (d - s) / (4.0 * m * r0)]
}

/// `r_t² = (C − K/r²)(1 − 2m/r) + 2mE²/r`.
pub fn rt_squared(r: f64, c: &ConservedSet, params: SchwarzschildParams) -> f64 {
    let m = params.m;
    (c.c - c.k / (r * r)) * (1.0 - 2.0 * m / r) + 2.0 * m * c.e * c.e / r
}

/// Residual of the radial equation
/// `r_tt − m r_t²/(r(r−2m)) + mE²/(r(r−2m)) − (r−2m)(K + L²)/r⁴ = 0`
/// given the radial acceleration `r_tt`.
pub fn radial_residual(
    params: SchwarzschildParams,
    c: &ConservedSet,
    state: &GeodesicState,
    r_tt: f64,
) -> f64 {
    let m = params.m;
    let r = state.y[1];
    let rt = state.v[1];
    let w = r * (r - 2.0 * m);
    r_tt - m * rt * rt / w + m * c.e * c.e / w - (r - 2.0 * m) * (c.k + c.l * c.l) / r.powi(4)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTable {
    pub alpha: Vec<f64>,
    /// `t(α) − t(α₀)`.
    pub t: Vec<f64>,
    /// `τ(α) − τ(α₀)`.
    pub tau: Vec<f64>,
}

/// Cumulative quadratures of `dt/dα = σ/(√K u²)` and
/// `dτ/dα = −σE/(√K u² (2mu − 1))` over the increasing or decreasing
/// sequence `alphas`; `sigma` is the sign of `α_t`.
///
/// Stops with an error once `u(α)` reaches the horizon value `1/(2m)`.
pub fn quadrature_t_tau(
    params: SchwarzschildParams,
    c: &ConservedSet,
    u_of_alpha: impl Fn(f64) -> Result<f64>,
    alphas: &[f64],
    sigma: f64,
) -> Result<QuadratureTable> {
    if !(c.k > 0.0) {
        return Err(Error::ProfileUndefined(format!(
            "K = {} must be positive",
            c.k
        )));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("empty α range".into()));
    }
    let m = params.m;
    let sk = c.k.sqrt();
    let u_horizon = 1.0 / (2.0 * m);
    for &a in alphas {
        let u = u_of_alpha(a)?;
        if !(u < u_horizon) || !(u > 0.0) {
            return Err(Error::BranchRange(format!(
                "u({a}) = {u} leaves (0, 1/(2m)) = (0, {u_horizon})"
            )));
        }
    }
    let mut failed = None;
    let mut eval = |a: f64, which: usize| -> f64 {
        match u_of_alpha(a) {
            Ok(u) => {
                let base = sigma / (sk * u * u);
                if which == 0 {
                    base
                } else {
                    -base * c.e / (2.0 * m * u - 1.0)
                }
            }
            Err(e) => {
                failed.get_or_insert(e.to_string());
                f64::NAN
            }
        }
    };
    let mut table = QuadratureTable {
        alpha: vec![alphas[0]],
        t: vec![0.0],
        tau: vec![0.0],
    };
    for w in alphas.windows(2) {
        let (dt, _) = quad::integrate(|a| eval(a, 0), w[0], w[1], 1e-14, 1e-13)?;
        let (dtau, _) = if c.e == 0.0 {
            (0.0, 0.0)
        } else {
            quad::integrate(|a| eval(a, 1), w[0], w[1], 1e-14, 1e-13)?
        };
        table.alpha.push(w[1]);
        table.t.push(table.t.last().unwrap() + dt);
        table.tau.push(table.tau.last().unwrap() + dtau);
    }
    if let Some(msg) = failed {
        return Err(Error::Quadrature(msg));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn params(m: f64) -> SchwarzschildParams {
        SchwarzschildParams::new(m).unwrap()
    }

    /// Constant-radius data with unit `f`.
    fn static_start(m: f64, r0: f64) -> InitialCurve {
        let w = (r0 * (r0 - 2.0 * m)).sqrt() / (r0 * r0);
        InitialCurve::from_exprs(
            ["0", &r0.to_string(), "1.1", "theta"],
            ["1", "0", &w.to_string(), "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap()
    }

    #[test]
    fn static_start_coefficients() {
        let (a, b) = cubic_coefficients(&static_start(1.0, 10.0), params(1.0), 0.3).unwrap();
        assert!(a.abs() < 1e-15, "{a}");
        assert!((b - 0.008).abs() < 1e-15, "{b}");
    }

    #[test]
    fn coefficients_agree_with_first_integrals() {
        let c = InitialCurve::from_exprs(
            ["theta", "7 + 0.2*theta", "1 + 0.1*theta", "0"],
            ["1.3", "-0.2", "0.05", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        let p = params(1.2);
        for th in [0.0, 0.4, 0.9] {
            let (a, b) = cubic_coefficients(&c, p, th).unwrap();
            let cs = crate::initial_data::conserved_from_data(&c, p, th).unwrap();
            let prof = CubicProfile::from_conserved(p, &cs, 0.0).unwrap();
            assert!((a - prof.a).abs() < 1e-12 * (1.0 + a.abs()));
            assert!((b - prof.b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn zero_polar_velocity_is_undefined() {
        let c = InitialCurve::from_exprs(
            ["0", "10", "1", "theta"],
            ["1", "0", "0", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        assert!(matches!(
            cubic_coefficients(&c, params(1.0), 0.5),
            Err(Error::ProfileUndefined(_))
        ));
    }

    #[test]
    fn static_start_roots_and_cases() {
        let p = CubicProfile::from_data(&static_start(1.0, 10.0), params(1.0), 0.0).unwrap();
        assert_eq!(p.case_label, CaseLabel::OuterBranch);
        let expect = [
            (8.0 + 128f64.sqrt()) / 40.0,
            0.1,
            (8.0 - 128f64.sqrt()) / 40.0,
        ];
        for (r, e) in p.roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-14, "{r} vs {e}");
        }
        assert!((p.roots[0] - 0.482843).abs() < 1e-6);
        assert!((p.roots[2] + 0.082843).abs() < 1e-6);
        let k2 = p.k_squared().unwrap();
        assert!((k2 - (0.1 - expect[2]) / (expect[0] - expect[2])).abs() < 1e-14);

        let p = CubicProfile::from_data(&static_start(1.0, 3.0), params(1.0), 0.0).unwrap();
        assert_eq!(p.case_label, CaseLabel::DoubleRoot);
        assert!((p.roots[0] - 1.0 / 3.0).abs() < 1e-9 && (p.roots[1] - 1.0 / 3.0).abs() < 1e-9);

        let p = CubicProfile::from_data(&static_start(1.0, 2.5), params(1.0), 0.0).unwrap();
        assert_eq!(p.case_label, CaseLabel::InnerBranch);
        assert!((p.roots[0] - 0.4).abs() < 1e-14);
    }

    #[test]
    fn zero_b_roots() {
        // B = 0 with the angular coefficient (r0 − 2m)/r0².
        for r0 in [3.0, 4.0, 10.0] {
            let a = (r0 - 2.0) / (r0 * r0) / 2.0;
            let p = CubicProfile::new(1.0, a, 0.0, 1.0 / r0).unwrap();
            let mut expect = vec![0.0, 1.0 / r0, (r0 - 2.0) / (2.0 * r0)];
            expect.sort_by(|x, y| y.total_cmp(x));
            for (r, e) in p.roots.iter().zip(&expect) {
                assert!((r - e).abs() < 1e-12, "r0={r0}: {r} vs {e}");
            }
            let want = match r0 {
                4.0 => CaseLabel::DoubleRoot,
                10.0 => CaseLabel::OuterBranch,
                _ => CaseLabel::InnerBranch,
            };
            assert_eq!(p.case_label, want, "r0={r0}");
        }
    }

    #[test]
    fn single_real_root_is_generic() {
        let p = CubicProfile::new(1.0, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(p.roots.len(), 1);
        assert_eq!(p.case_label, CaseLabel::Generic);
        assert!(p.root_residual() < 1e-12);
    }

    #[test]
    fn rt_squared_examples() {
        let p = params(1.0);
        let c = ConservedSet {
            e: 1.0,
            l: 0.0,
            k: 0.0,
            c: 1.0,
        };
        for r in [2.5, 10.0, 100.0] {
            assert!((rt_squared(r, &c, p) - 1.0).abs() < 1e-14);
        }
        // Circular start at the photon sphere.
        let curve = static_start(1.0, 3.0);
        let cs = crate::initial_data::conserved_from_data(&curve, p, 0.0).unwrap();
        assert!(rt_squared(3.0, &cs, p).abs() < 1e-14);
        let cs = crate::initial_data::conserved_from_data(&static_start(1.0, 7.0), p, 0.0).unwrap();
        assert!(rt_squared(7.0, &cs, p).abs() < 1e-14);
    }

    #[test]
    fn circular_quadratures() {
        let p = params(1.0);
        // r ≡ 3: dt/dα = 3√3.
        let c = ConservedSet {
            e: 1.0 / 3.0,
            l: 0.0,
            k: 3.0,
            c: 1.0 / 9.0 * 3.0,
        };
        let tab = quadrature_t_tau(p, &c, |_| Ok(1.0 / 3.0), &[0.0, 0.5, 1.0], 1.0).unwrap();
        assert!((tab.t[2] - 3.0 * 3f64.sqrt()).abs() < 1e-13);
        // dτ/dα = E r/(r − 2m) · dt/dα = 1 · 3√3
        assert!((tab.tau[2] - 3.0 * 3f64.sqrt()).abs() < 1e-13);
        // r ≡ 4, K = 4: dt/dα = 8.
        let c = ConservedSet {
            e: 0.5,
            l: 0.0,
            k: 4.0,
            c: 0.25,
        };
        let tab = quadrature_t_tau(p, &c, |_| Ok(0.25), &[0.0, 1.0], 1.0).unwrap();
        assert!((tab.t[1] - 8.0).abs() < 1e-13);
        let c = ConservedSet { e: 0.0, ..c };
        let tab = quadrature_t_tau(p, &c, |_| Ok(0.25), &[0.0, 1.0], -1.0).unwrap();
        assert_eq!(tab.tau[1], 0.0);
        assert!((tab.t[1] + 8.0).abs() < 1e-13);
    }

    #[test]
    fn quadrature_stops_at_horizon() {
        let c = ConservedSet {
            e: 0.5,
            l: 0.0,
            k: 4.0,
            c: 0.25,
        };
        let r = quadrature_t_tau(params(1.0), &c, |a| Ok(0.25 + a), &[0.0, 0.3], 1.0);
        assert!(matches!(r, Err(Error::BranchRange(_))));
    }
}
