//! Exact light-like surfaces in Schwarzschild built from three families of
//! initial data, used as references for the numerical pipeline.
//!
//! * [`RadialNull`]: constant-angle strip moving radially, `r = r₁t + r₀`.
//! * [`StaticStart`]: strip at constant `r₀` with a polar kick; circular at
//!   the photon sphere `r₀ = 3m`, elliptic otherwise.
//! * [`TiltedStart`]: strip at constant `r₀` tilted in `(τ, α)`, `Λ ≡ −1`;
//!   circular at `r₀ = 4m`, elliptic otherwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geodesic::GeodesicState;
use crate::initial_data::{ConservedSet, CurveComponent, InitialCurve};
use crate::oracles::branches::EllipticBranch;
use crate::oracles::OracleKind;
use crate::quad;
use crate::reduction::{static_start_roots, CubicProfile};
use crate::spacetime::{SchwarzschildParams, Vector};

/// Relative tolerance on `r₀/m` for routing to the circular cases.
pub const CASE_TOL: f64 = 1e-12;

fn check_sign(sign: f64) -> Result<()> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(format!(
            "sign flag must be ±1, got {sign}"
        )));
    }
    Ok(())
}

fn check_radius(m: f64, r0: f64) -> Result<SchwarzschildParams> {
    let p = SchwarzschildParams::new(m)?;
    if !(r0 > 2.0 * m) {
        return Err(Error::Horizon {
            r: r0,
            two_m: 2.0 * m,
        });
    }
    Ok(p)
}

fn near_ratio(m: f64, r0: f64, ratio: f64) -> bool {
    (r0 / m - ratio).abs() <= CASE_TOL * ratio
}

/// `r = r₁t + r₀`, `r − r₀ + 2m ln((r−2m)/(r₀−2m)) = s(τ − τ₀)`,
/// `α = α₀(ϑ)`, `β = ϑ`.
#[derive(Debug, Clone)]
pub struct RadialNull {
    pub m: f64,
    pub r0: f64,
    /// Radial velocity; negative values fall towards the horizon.
    pub r1: f64,
    pub tau0: f64,
    pub alpha0: CurveComponent,
    /// Sign of `τ_t`.
    pub sign: f64,
}

impl RadialNull {
    pub fn new(
        m: f64,
        r0: f64,
        r1: f64,
        tau0: f64,
        alpha0: CurveComponent,
        sign: f64,
    ) -> Result<Self> {
        check_radius(m, r0)?;
        check_sign(sign)?;
        if r1 == 0.0 || !r1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r1 must be non-zero, got {r1}"
            )));
        }
        Ok(Self {
            m,
            r0,
            r1,
            tau0,
            alpha0,
            sign,
        })
    }

    pub fn initial_curve(&self, domain: (f64, f64)) -> Result<InitialCurve> {
        let f0 = 1.0 - 2.0 * self.m / self.r0;
        InitialCurve::new(
            [
                CurveComponent::constant(self.tau0),
                CurveComponent::constant(self.r0),
                self.alpha0.clone(),
                CurveComponent::with_derivative(|v| v, |_| 1.0),
            ],
            [
                CurveComponent::constant(self.sign * self.r1 / f0),
                CurveComponent::constant(self.r1),
                CurveComponent::constant(0.0),
                CurveComponent::constant(0.0),
            ],
            domain,
            false,
        )
    }

    fn log_term(&self, r: f64) -> f64 {
        r - self.r0 + 2.0 * self.m * ((r - 2.0 * self.m) / (self.r0 - 2.0 * self.m)).ln()
    }

    pub fn state_at(&self, t: f64, vartheta: f64) -> Result<GeodesicState> {
        let r = self.r1 * t + self.r0;
        if !(r > 2.0 * self.m) {
            return Err(Error::Horizon {
                r,
                two_m: 2.0 * self.m,
            });
        }
        let tau = self.tau0 + self.sign * self.log_term(r);
        let tau_t = self.sign * self.r1 * r / (r - 2.0 * self.m);
        Ok(GeodesicState::new(
            t,
            [tau, r, self.alpha0.value(vartheta), vartheta],
            [tau_t, self.r1, 0.0, 0.0],
        ))
    }

    /// `r − r₀ + 2m ln((r−2m)/(r₀−2m)) − s(τ − τ₀)`.
    pub fn tau_relation_residual(&self, y: &Vector) -> f64 {
        self.log_term(y[1]) - self.sign * (y[0] - self.tau0)
    }

    pub fn conserved(&self) -> ConservedSet {
        let e = self.sign * self.r1;
        ConservedSet {
            e,
            l: 0.0,
            k: 0.0,
            c: self.r1 * self.r1,
        }
    }
}

/// Per-characteristic elliptic motion: `u(α)` from the branch, `t(α)` and
/// `τ(α)` by quadrature.
#[derive(Debug, Clone, Copy)]
pub struct BranchMotion {
    pub branch: EllipticBranch,
    pub conserved: ConservedSet,
    pub tau0: f64,
    pub beta: f64,
}

impl BranchMotion {
    /// `dt/d(ξ/2)`, positive along the motion direction.
    fn dt_dhalf(&self, h: f64) -> f64 {
        let u = self.branch.u_of_half_xi(h);
        self.branch.sigma * self.branch.dalpha_dhalf(h) / (self.conserved.k.sqrt() * u * u)
    }

    fn dtau_dhalf(&self, h: f64) -> f64 {
        let u = self.branch.u_of_half_xi(h);
        -self.dt_dhalf(h) * self.conserved.e / (2.0 * self.branch.m * u - 1.0)
    }

    fn t_segment(&self, a: f64, b: f64) -> Result<f64> {
        Ok(quad::integrate(|h| self.dt_dhalf(h), a, b, 1e-14, 1e-13)?.0)
    }

    fn tau_segment(&self, a: f64, b: f64) -> Result<f64> {
        if self.conserved.e == 0.0 || a == b {
            return Ok(0.0);
        }
        Ok(quad::integrate(|h| self.dtau_dhalf(h), a, b, 1e-14, 1e-13)?.0)
    }

    fn state(&self, t: f64, h: f64, tau: f64) -> Result<GeodesicState> {
        let b = &self.branch;
        let u = b.u_of_half_xi(h);
        let alpha = b.alpha_of_half_xi(h)?;
        let alpha_t = b.sigma * self.conserved.k.sqrt() * u * u;
        let r_t = -(b.du_dhalf(h) / b.dalpha_dhalf(h)) * alpha_t / (u * u);
        let tau_t = self.conserved.e / (1.0 - 2.0 * b.m * u);
        Ok(GeodesicState::new(
            t,
            [tau, 1.0 / u, alpha, self.beta],
            [tau_t, r_t, alpha_t, 0.0],
        ))
    }

    /// States at the increasing, non-negative times `ts`. The motion is
    /// parameterized by the half angle `ξ/2`, so `u` is explicit and `t`, `τ`
    /// are cumulative quadratures; each target time is reached by Newton
    /// iteration on `t(ξ/2)`.
    pub fn sample(&self, ts: &[f64]) -> Result<Vec<GeodesicState>> {
        let b = &self.branch;
        let mut h = b.half_xi_start();
        let limit = b.half_xi_limit();
        // Branches that run off to u = 0 take infinite time.
        let t_end = self.t_segment(h, limit).unwrap_or(f64::INFINITY);
        let mut t_acc = 0.0;
        let mut tau_acc = self.tau0;
        let mut h_tau = h;
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            if t < t_acc - 1e-15 * (1.0 + t) {
                return Err(Error::InvalidParameter(
                    "sample times must be increasing and ≥ 0".into(),
                ));
            }
            if t >= t_end {
                return Err(Error::BranchRange(format!(
                    "t = {t} is beyond the end of the branch at t = {t_end}"
                )));
            }
            for _ in 0..200 {
                let need = t - t_acc;
                if need.abs() <= 1e-15 * (1.0 + t) {
                    break;
                }
                let mut step = need / self.dt_dhalf(h);
                let room = limit - h;
                if step / room > 0.5 {
                    step = 0.5 * room;
                }
                t_acc += self.t_segment(h, h + step)?;
                h += step;
            }
            tau_acc += self.tau_segment(h_tau, h)?;
            h_tau = h;
            out.push(self.state(t, h, tau_acc)?);
        }
        Ok(out)
    }
}

/// Constant-radius strip `φ = (τ₀, r₀, α₀, ϑ)` with
/// `ψ = (f, 0, s|f|√(r₀(r₀−2m))/r₀², 0)`.
#[derive(Debug, Clone)]
pub struct StaticStart {
    pub m: f64,
    pub r0: f64,
    pub tau0: f64,
    pub alpha0: f64,
    pub f: CurveComponent,
    /// Sign of `α_t`.
    pub sign: f64,
}

impl StaticStart {
    pub fn new(
        m: f64,
        r0: f64,
        tau0: f64,
        alpha0: f64,
        f: CurveComponent,
        sign: f64,
    ) -> Result<Self> {
        check_radius(m, r0)?;
        check_sign(sign)?;
        Ok(Self {
            m,
            r0,
            tau0,
            alpha0,
            f,
            sign,
        })
    }

    pub fn kind(&self) -> OracleKind {
        if near_ratio(self.m, self.r0, 3.0) {
            OracleKind::PhotonSphere
        } else if self.r0 < 3.0 * self.m {
            OracleKind::Ex2Inner
        } else {
            OracleKind::Ex2Outer
        }
    }

    fn polar_rate(&self) -> f64 {
        (self.r0 * (self.r0 - 2.0 * self.m)).sqrt() / (self.r0 * self.r0)
    }

    pub fn initial_curve(&self, domain: (f64, f64)) -> Result<InitialCurve> {
        let w = self.sign * self.polar_rate();
        let (f1, f2) = (self.f.clone(), self.f.clone());
        InitialCurve::new(
            [
                CurveComponent::constant(self.tau0),
                CurveComponent::constant(self.r0),
                CurveComponent::constant(self.alpha0),
                CurveComponent::with_derivative(|v| v, |_| 1.0),
            ],
            [
                self.f.clone(),
                CurveComponent::constant(0.0),
                CurveComponent::with_derivative(
                    move |v| w * f1.value(v).abs(),
                    move |v| w * f2.value(v).signum() * f2.derivative(v),
                ),
                CurveComponent::constant(0.0),
            ],
            domain,
            false,
        )
    }

    /// `(E, L, K, C)` of the characteristic through `ϑ`.
    pub fn conserved(&self, vartheta: f64) -> ConservedSet {
        let f = self.f.value(vartheta);
        let k = self.r0 * (self.r0 - 2.0 * self.m) * f * f;
        let e = (1.0 - 2.0 * self.m / self.r0) * f;
        ConservedSet {
            e,
            l: 0.0,
            k,
            c: k / self.r0.powi(2) * (self.r0 - 2.0 * self.m) / self.r0,
        }
    }

    fn f_at(&self, vartheta: f64) -> Result<f64> {
        let f = self.f.value(vartheta);
        if f == 0.0 || !f.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "f({vartheta}) = {f} must be non-zero"
            )));
        }
        Ok(f)
    }

    /// Cubic profile, identical for every characteristic.
    pub fn profile(&self) -> Result<CubicProfile> {
        CubicProfile::new(
            self.m,
            0.0,
            (self.r0 - 2.0 * self.m) / self.r0.powi(3),
            1.0 / self.r0,
        )
    }

    pub fn branch(&self) -> Result<EllipticBranch> {
        let [u1, u2, u3] = static_start_roots(self.m, self.r0);
        let (shape, roots) = match self.kind() {
            OracleKind::Ex2Inner => (super::branches::BranchShape::Secant, [u1, u2, u3]),
            OracleKind::Ex2Outer => (super::branches::BranchShape::Cosine, [u2, u1, u3]),
            _ => {
                return Err(Error::BranchRange(
                    "the photon-sphere case has no elliptic branch".into(),
                ))
            }
        };
        EllipticBranch::new(shape, self.m, roots, self.alpha0, self.sign)
    }

    pub fn motion(&self, vartheta: f64) -> Result<BranchMotion> {
        self.f_at(vartheta)?;
        Ok(BranchMotion {
            branch: self.branch()?,
            conserved: self.conserved(vartheta),
            tau0: self.tau0,
            beta: vartheta,
        })
    }

    pub fn sample(&self, vartheta: f64, ts: &[f64]) -> Result<Vec<GeodesicState>> {
        let f = self.f_at(vartheta)?;
        if self.kind() == OracleKind::PhotonSphere {
            let w = self.sign * f.abs() / (3.0 * 3f64.sqrt() * self.m);
            return Ok(ts
                .iter()
                .map(|&t| {
                    GeodesicState::new(
                        t,
                        [f * t + self.tau0, self.r0, w * t + self.alpha0, vartheta],
                        [f, 0.0, w, 0.0],
                    )
                })
                .collect());
        }
        self.motion(vartheta)?.sample(ts)
    }

    /// Residual of the case's closed-form relation at the point `y`.
    pub fn relation_residual(&self, t: f64, vartheta: f64, y: &Vector) -> Result<f64> {
        if self.kind() == OracleKind::PhotonSphere {
            let exact = self.sample(vartheta, &[t])?[0].y;
            return Ok((y[1] - exact[1]).abs().max((y[2] - exact[2]).abs()));
        }
        self.branch()?.alpha_residual(1.0 / y[1], y[2])
    }
}

/// Tilted strip `φ = (ϑ, r₀, s·wϑ, β₀)`, `ψ = φ' = (1, 0, s·w, 0)` with
/// `w = √(2m(r₀−2m))/r₀²`, which makes `B = 0` and `Λ ≡ −1`.
#[derive(Debug, Clone, Copy)]
pub struct TiltedStart {
    pub m: f64,
    pub r0: f64,
    pub beta0: f64,
    pub sign: f64,
}

impl TiltedStart {
    pub fn new(m: f64, r0: f64, beta0: f64, sign: f64) -> Result<Self> {
        check_radius(m, r0)?;
        check_sign(sign)?;
        Ok(Self { m, r0, beta0, sign })
    }

    pub fn kind(&self) -> OracleKind {
        if near_ratio(self.m, self.r0, 4.0) {
            OracleKind::Ex3Circular
        } else if self.r0 > 4.0 * self.m {
            OracleKind::Ex3Outer
        } else {
            OracleKind::Ex3Inner
        }
    }

    pub fn tilt(&self) -> f64 {
        self.sign * (2.0 * self.m * (self.r0 - 2.0 * self.m)).sqrt() / (self.r0 * self.r0)
    }

    pub fn initial_curve(&self, domain: (f64, f64)) -> Result<InitialCurve> {
        let w = self.tilt();
        InitialCurve::new(
            [
                CurveComponent::with_derivative(|v| v, |_| 1.0),
                CurveComponent::constant(self.r0),
                CurveComponent::with_derivative(move |v| w * v, move |_| w),
                CurveComponent::constant(self.beta0),
            ],
            [
                CurveComponent::constant(1.0),
                CurveComponent::constant(0.0),
                CurveComponent::constant(w),
                CurveComponent::constant(0.0),
            ],
            domain,
            false,
        )
    }

    pub fn conserved(&self) -> ConservedSet {
        let k = 2.0 * self.m * (self.r0 - 2.0 * self.m);
        ConservedSet {
            e: 1.0 - 2.0 * self.m / self.r0,
            l: 0.0,
            k,
            c: 0.0,
        }
    }

    pub fn profile(&self) -> Result<CubicProfile> {
        let a = (self.r0 - 2.0 * self.m) / (2.0 * self.m * self.r0 * self.r0);
        CubicProfile::new(self.m, a, 0.0, 1.0 / self.r0)
    }

    pub fn branch(&self, vartheta: f64) -> Result<EllipticBranch> {
        let inner = 1.0 / self.r0;
        let outer = (self.r0 - 2.0 * self.m) / (2.0 * self.m * self.r0);
        let (shape, roots) = match self.kind() {
            OracleKind::Ex3Outer => (super::branches::BranchShape::Cosine, [outer, inner, 0.0]),
            OracleKind::Ex3Inner => (super::branches::BranchShape::Secant, [inner, outer, 0.0]),
            _ => {
                return Err(Error::BranchRange(
                    "the r₀ = 4m case has no elliptic branch".into(),
                ))
            }
        };
        EllipticBranch::new(shape, self.m, roots, self.tilt() * vartheta, self.sign)
    }

    pub fn motion(&self, vartheta: f64) -> Result<BranchMotion> {
        Ok(BranchMotion {
            branch: self.branch(vartheta)?,
            conserved: self.conserved(),
            tau0: vartheta,
            beta: self.beta0,
        })
    }

    pub fn sample(&self, vartheta: f64, ts: &[f64]) -> Result<Vec<GeodesicState>> {
        if self.kind() == OracleKind::Ex3Circular {
            let w = self.sign / (8.0 * self.m);
            return Ok(ts
                .iter()
                .map(|&t| {
                    GeodesicState::new(
                        t,
                        [t + vartheta, self.r0, w * (t + vartheta), self.beta0],
                        [1.0, 0.0, w, 0.0],
                    )
                })
                .collect());
        }
        self.motion(vartheta)?.sample(ts)
    }

    pub fn relation_residual(&self, t: f64, vartheta: f64, y: &Vector) -> Result<f64> {
        if self.kind() == OracleKind::Ex3Circular {
            let exact = self.sample(vartheta, &[t])?[0].y;
            return Ok((y[1] - exact[1]).abs().max((y[2] - exact[2]).abs()));
        }
        self.branch(vartheta)?.alpha_residual(1.0 / y[1], y[2])
    }
}

/// Reduces an angle difference to `(−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{geodesic_rhs, tangent_norm};
    use crate::initial_data::{conserved_from_data, uniform_grid, validate, Tolerances};
    use crate::spacetime::Schwarzschild;

    fn radial() -> RadialNull {
        RadialNull::new(1.0, 10.0, 1.0, 0.0, CurveComponent::constant(1.2), 1.0).unwrap()
    }

    #[test]
    fn radial_null_values() {
        let o = radial();
        let s = o.state_at(5.0, 0.7).unwrap();
        assert_eq!(s.y[1], 15.0);
        assert!((s.y[0] - (5.0 + 2.0 * (13.0f64 / 8.0).ln())).abs() < 1e-14);
        assert_eq!(s.y[3], 0.7);
        assert!(o.tau_relation_residual(&s.y).abs() < 1e-14);
        let s0 = o.state_at(0.0, 0.7).unwrap();
        assert_eq!(s0.y, [0.0, 10.0, 1.2, 0.7]);
        let c = conserved_from_data(
            &o.initial_curve((0.0, 1.0)).unwrap(),
            SchwarzschildParams::new(1.0).unwrap(),
            0.3,
        )
        .unwrap();
        assert!((c.e - 1.0).abs() < 1e-15 && c.l == 0.0 && c.k == 0.0);
    }

    #[test]
    fn photon_sphere_values() {
        let o = StaticStart::new(1.0, 3.0, 0.5, 1.1, CurveComponent::constant(1.0), 1.0).unwrap();
        assert_eq!(o.kind(), OracleKind::PhotonSphere);
        let s = o.sample(0.3, &[2.0]).unwrap()[0];
        assert!((s.y[0] - 2.5).abs() < 1e-15);
        assert_eq!(s.y[1], 3.0);
        assert!((s.y[2] - (2.0 / (3.0 * 3f64.sqrt()) + 1.1)).abs() < 1e-15);
        assert_eq!(s.y[3], 0.3);
    }

    #[test]
    fn tilted_circular_values() {
        let o = TiltedStart::new(1.0, 4.0, 0.2, 1.0).unwrap();
        assert_eq!(o.kind(), OracleKind::Ex3Circular);
        let s = o.sample(1.0, &[3.0]).unwrap()[0];
        assert_eq!(s.y, [4.0, 4.0, 0.5, 0.2]);
        let norm = tangent_norm(&Schwarzschild::new(1.0).unwrap(), &s).unwrap();
        assert!((norm + 0.25).abs() < 1e-15, "{norm}");
    }

    #[test]
    fn case_routing() {
        let c = CurveComponent::constant(1.0);
        let st = |r0: f64| {
            StaticStart::new(1.0, r0, 0.0, 1.0, c.clone(), 1.0)
                .unwrap()
                .kind()
        };
        assert_eq!(st(3.0 * (1.0 + 1e-13)), OracleKind::PhotonSphere);
        assert_eq!(st(2.5), OracleKind::Ex2Inner);
        assert_eq!(st(10.0), OracleKind::Ex2Outer);
        let tl = |r0: f64| TiltedStart::new(1.0, r0, 0.0, 1.0).unwrap().kind();
        assert_eq!(tl(4.0 * (1.0 - 1e-13)), OracleKind::Ex3Circular);
        assert_eq!(tl(10.0), OracleKind::Ex3Outer);
        assert_eq!(tl(3.0), OracleKind::Ex3Inner);
        assert!(TiltedStart::new(1.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn t_zero_reproduces_data_and_validates() {
        let s = Schwarzschild::new(1.0).unwrap();
        let f = CurveComponent::expr("1 + 0.2*sin(theta)", &Default::default()).unwrap();
        let domain = (0.5, 2.0);
        let grid = uniform_grid(domain, 17);
        let statics: Vec<StaticStart> = [3.0, 2.5, 10.0]
            .iter()
            .map(|&r0| StaticStart::new(1.0, r0, 0.3, 1.1, f.clone(), -1.0).unwrap())
            .collect();
        for o in &statics {
            let curve = o.initial_curve(domain).unwrap();
            assert!(
                validate(&curve, &s, &grid, &Tolerances::default())
                    .unwrap()
                    .passed
            );
            for &v in &grid {
                let st = o.sample(v, &[0.0]).unwrap()[0];
                for i in 0..4 {
                    assert!((st.y[i] - curve.phi(v)[i]).abs() < 1e-12);
                    assert!(
                        (st.v[i] - curve.psi(v)[i]).abs() < 1e-12,
                        "{:?} {i}",
                        o.kind()
                    );
                }
            }
        }
        for r0 in [4.0, 10.0, 3.0] {
            let o = TiltedStart::new(1.0, r0, 0.2, 1.0).unwrap();
            let curve = o.initial_curve(domain).unwrap();
            assert!(
                validate(&curve, &s, &grid, &Tolerances::default())
                    .unwrap()
                    .passed
            );
            for &v in &grid {
                let st = o.sample(v, &[0.0]).unwrap()[0];
                for i in 0..4 {
                    assert!((st.y[i] - curve.phi(v)[i]).abs() < 1e-12);
                    assert!((st.v[i] - curve.psi(v)[i]).abs() < 1e-12);
                }
            }
        }
        let curve = radial().initial_curve(domain).unwrap();
        assert!(
            validate(&curve, &s, &grid, &Tolerances::default())
                .unwrap()
                .passed
        );
    }

    #[test]
    fn outer_branch_starts_at_alpha0() {
        let o = StaticStart::new(1.0, 10.0, 0.0, 1.1, CurveComponent::constant(1.0), 1.0).unwrap();
        let b = o.branch().unwrap();
        assert!((b.half_xi_of_u(0.1).unwrap() * 2.0 - PI).abs() < 1e-15);
        assert!((b.alpha_of_u(0.1).unwrap() - 1.1).abs() < 1e-15);
    }

    /// Velocity and acceleration of the oracle satisfy the geodesic equation.
    fn geodesic_residual(samples: impl Fn(&[f64]) -> Vec<GeodesicState>, t: f64) -> f64 {
        let s = Schwarzschild::new(1.0).unwrap();
        let h = 1e-2;
        let st = samples(&[t - 2.0 * h, t - h, t, t + h, t + 2.0 * h]);
        let mut worst = 0.0f64;
        let acc = geodesic_rhs(&s, &st[2]).unwrap();
        for i in 0..4 {
            let fd = (st[0].v[i] - 8.0 * st[1].v[i] + 8.0 * st[3].v[i] - st[4].v[i]) / (12.0 * h);
            worst = worst.max((fd - acc[i]).abs());
            let fdx = (st[0].y[i] - 8.0 * st[1].y[i] + 8.0 * st[3].y[i] - st[4].y[i]) / (12.0 * h);
            worst = worst.max((fdx - st[2].v[i]).abs());
        }
        worst
    }

    #[test]
    fn oracles_satisfy_the_geodesic_equation() {
        let f = CurveComponent::constant(1.0);
        let o = StaticStart::new(1.0, 10.0, 0.0, 1.1, f.clone(), 1.0).unwrap();
        for t in [0.5, 3.0, 10.0] {
            let r = geodesic_residual(|ts| o.sample(0.2, ts).unwrap(), t);
            assert!(r < 1e-8, "static r0=10 t={t}: {r:e}");
        }
        let o = StaticStart::new(1.0, 2.5, 0.0, 1.1, f, -1.0).unwrap();
        let r = geodesic_residual(|ts| o.sample(0.2, ts).unwrap(), 0.5);
        assert!(r < 1e-8, "static r0=2.5: {r:e}");
        for r0 in [10.0, 3.0] {
            let o = TiltedStart::new(1.0, r0, 0.2, 1.0).unwrap();
            let r = geodesic_residual(|ts| o.sample(5.0, ts).unwrap(), 0.6);
            assert!(r < 1e-8, "tilted r0={r0}: {r:e}");
        }
        let o = radial();
        let r = geodesic_residual(
            |ts| ts.iter().map(|&t| o.state_at(t, 0.1).unwrap()).collect(),
            4.0,
        );
        assert!(r < 1e-8, "radial: {r:e}");
    }

    #[test]
    fn inner_branch_ends_at_horizon() {
        let o = StaticStart::new(1.0, 2.5, 0.0, 1.1, CurveComponent::constant(1.0), 1.0).unwrap();
        assert!(matches!(
            o.sample(0.0, &[100.0]),
            Err(Error::BranchRange(_))
        ));
    }
}
