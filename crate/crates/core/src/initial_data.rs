//! Initial curves `(φ, ψ)` on the worldsheet, their validation, and the
//! Schwarzschild first integrals they determine.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::spacetime::{induced_metric, SchwarzschildParams, Spacetime, Vector, DIM};
use crate::spline::CubicSpline;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One scalar component of the initial position or velocity, as a function of ϑ.
#[derive(Clone)]
pub enum CurveComponent {
    Expr { value: Expr, derivative: Expr },
    Spline(CubicSpline),
    Function { f: ScalarFn, df: Option<ScalarFn> },
}

impl fmt::Debug for CurveComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveComponent::Expr { value, .. } => write!(f, "Expr({value})"),
            CurveComponent::Spline(s) => write!(f, "Spline({} knots)", s.knots().len()),
            CurveComponent::Function { df, .. } => {
                write!(f, "Function(analytic derivative: {})", df.is_some())
            }
        }
    }
}

impl CurveComponent {
    pub fn constant(c: f64) -> Self {
        CurveComponent::Expr {
            value: Expr::Num(c),
            derivative: Expr::Num(0.0),
        }
    }

    pub fn expr(src: &str, constants: &HashMap<String, f64>) -> Result<Self> {
        let value = Expr::parse(src, constants)?;
        let derivative = value.derivative();
        Ok(CurveComponent::Expr { value, derivative })
    }

    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CurveComponent::Function {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CurveComponent::Function {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
        }
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self {
            CurveComponent::Expr { value, .. } => value.eval(theta),
            CurveComponent::Spline(s) => s.eval(theta),
            CurveComponent::Function { f, .. } => f(theta),
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match self {
            CurveComponent::Expr { derivative, .. } => derivative.eval(theta),
            CurveComponent::Spline(s) => s.derivative(theta),
            CurveComponent::Function { df: Some(df), .. } => df(theta),
            CurveComponent::Function { f, df: None } => central_difference4(f.as_ref(), theta),
        }
    }
}

/// Fourth-order central difference with step `ε^{1/5}·max(1, |x|)`.
pub fn central_difference4(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = f64::EPSILON.powf(0.2) * x.abs().max(1.0);
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Initial position `φ(ϑ)` and velocity `ψ(ϑ)` of the worldsheet at `t = 0`.
#[derive(Debug, Clone)]
pub struct InitialCurve {
    pub phi: [CurveComponent; DIM],
    pub psi: [CurveComponent; DIM],
    pub domain: (f64, f64),
    pub periodic: bool,
}

impl InitialCurve {
    pub fn new(
        phi: [CurveComponent; DIM],
        psi: [CurveComponent; DIM],
        domain: (f64, f64),
        periodic: bool,
    ) -> Result<Self> {
        if !(domain.1 > domain.0) {
            return Err(Error::InvalidParameter(format!(
                "initial curve domain must be increasing, got {domain:?}"
            )));
        }
        Ok(Self {
            phi,
            psi,
            domain,
            periodic,
        })
    }

    pub fn from_exprs(
        phi: [&str; DIM],
        psi: [&str; DIM],
        constants: &HashMap<String, f64>,
        domain: (f64, f64),
        periodic: bool,
    ) -> Result<Self> {
        let build = |srcs: [&str; DIM]| -> Result<[CurveComponent; DIM]> {
            Ok([
                CurveComponent::expr(srcs[0], constants)?,
                CurveComponent::expr(srcs[1], constants)?,
                CurveComponent::expr(srcs[2], constants)?,
                CurveComponent::expr(srcs[3], constants)?,
            ])
        };
        Self::new(build(phi)?, build(psi)?, domain, periodic)
    }

    /// Curve from samples on strictly increasing `thetas`, interpolated with
    /// not-a-knot cubic splines.
    pub fn from_samples(
        thetas: &[f64],
        phi: &[Vector],
        psi: &[Vector],
        periodic: bool,
    ) -> Result<Self> {
        if phi.len() != thetas.len() || psi.len() != thetas.len() {
            return Err(Error::InvalidParameter(
                "sample arrays must match the ϑ grid length".into(),
            ));
        }
        let build = |rows: &[Vector]| -> Result<[CurveComponent; DIM]> {
            let comp = |i: usize| -> Result<CurveComponent> {
                let ys = rows.iter().map(|r| r[i]).collect();
                Ok(CurveComponent::Spline(CubicSpline::new(
                    thetas.to_vec(),
                    ys,
                )?))
            };
            Ok([comp(0)?, comp(1)?, comp(2)?, comp(3)?])
        };
        let domain = (thetas[0], thetas[thetas.len() - 1]);
        Self::new(build(phi)?, build(psi)?, domain, periodic)
    }

    pub fn phi(&self, theta: f64) -> Vector {
        std::array::from_fn(|i| self.phi[i].value(theta))
    }

    pub fn phi_prime(&self, theta: f64) -> Vector {
        std::array::from_fn(|i| self.phi[i].derivative(theta))
    }

    pub fn psi(&self, theta: f64) -> Vector {
        std::array::from_fn(|i| self.psi[i].value(theta))
    }

    pub fn period(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    /// `n ≥ 2` uniformly spaced samples covering the domain, endpoints included.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.domain, n)
    }

    /// Largest endpoint mismatch of a periodic curve, with angular coordinates
    /// compared modulo their period.
    pub fn periodic_mismatch<S: Spacetime + ?Sized>(&self, spacetime: &S) -> f64 {
        let (a, b) = self.domain;
        let (pa, pb) = (self.phi(a), self.phi(b));
        let (va, vb) = (self.psi(a), self.psi(b));
        let mut worst = 0.0f64;
        for i in 0..DIM {
            let mut d = pb[i] - pa[i];
            if let Some(p) = spacetime.coordinate_period(i) {
                d -= p * (d / p).round();
            }
            worst = worst.max(d.abs()).max((vb[i] - va[i]).abs());
        }
        worst
    }
}

pub fn uniform_grid(domain: (f64, f64), n: usize) -> Vec<f64> {
    let n = n.max(2);
    let (a, b) = domain;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// First integrals of a Schwarzschild geodesic: energy `E`, azimuthal `L`,
/// the angular constant `K ≥ 0`, and the radial constant `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    pub e: f64,
    pub l: f64,
    pub k: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Largest `|Δ(0, ϑ)|` accepted as light-like.
    pub eps_delta: f64,
    /// Most negative difference quotient of Λ accepted as monotone.
    pub eps_mono: f64,
    /// Smallest `|g11|` for which Λ is defined.
    pub eps_g11: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_delta: 1e-9,
            eps_mono: 1e-10,
            eps_g11: 1e-12,
        }
    }
}

/// `Δ(0, ϑ)` of the initial strip.
pub fn lightlikeness_residual<S: Spacetime + ?Sized>(
    curve: &InitialCurve,
    spacetime: &S,
    theta: f64,
) -> Result<f64> {
    let im = induced_metric(
        spacetime,
        &curve.phi(theta),
        &curve.psi(theta),
        &curve.phi_prime(theta),
    )?;
    Ok(im.delta)
}

/// `Δ(0, ϑ)` in Schwarzschild written as a signed sum of squared 2×2 minors.
pub fn schwarzschild_delta_expanded(curve: &InitialCurve, m: f64, theta: f64) -> f64 {
    let p = curve.phi(theta);
    let dp = curve.phi_prime(theta);
    let v = curve.psi(theta);
    let r = p[1];
    let f = 1.0 - 2.0 * m / r;
    let s2 = p[2].sin().powi(2);
    let minor = |i: usize, j: usize| v[i] * dp[j] - v[j] * dp[i];
    minor(0, 1).powi(2) + f * r * r * minor(0, 2).powi(2) + f * r * r * s2 * minor(0, 3).powi(2)
        - r * r / f * minor(1, 2).powi(2)
        - r * r * s2 / f * minor(1, 3).powi(2)
        - r.powi(4) * s2 * minor(3, 2).powi(2)
}

/// `Λ(ϑ) = −g01/g11` of the initial strip.
pub fn lambda0<S: Spacetime + ?Sized>(
    curve: &InitialCurve,
    spacetime: &S,
    theta: f64,
    eps_g11: f64,
) -> Result<f64> {
    let im = induced_metric(
        spacetime,
        &curve.phi(theta),
        &curve.psi(theta),
        &curve.phi_prime(theta),
    )?;
    if im.g11.abs() <= eps_g11 {
        return Err(Error::DegenerateG11 {
            theta,
            g11: im.g11,
            eps: eps_g11,
        });
    }
    Ok(-im.g01 / im.g11)
}

/// Λ(ϑ) in Schwarzschild as the explicit ratio of metric-weighted sums.
pub fn schwarzschild_lambda_closed_form(curve: &InitialCurve, m: f64, theta: f64) -> f64 {
    let p = curve.phi(theta);
    let dp = curve.phi_prime(theta);
    let v = curve.psi(theta);
    let f = 1.0 - 2.0 * m / p[1];
    let r2 = p[1] * p[1];
    let s2 = p[2].sin().powi(2);
    let num = -f * dp[0] * v[0] + dp[1] * v[1] / f + r2 * dp[2] * v[2] + r2 * s2 * dp[3] * v[3];
    let den = -f * dp[0] * dp[0] + dp[1] * dp[1] / f + r2 * dp[2] * dp[2] + r2 * s2 * dp[3] * dp[3];
    -num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    /// Smallest difference quotient of Λ over consecutive grid samples.
    pub min_slope: f64,
    /// Interval `[ϑ_i, ϑ_{i+1}]` where `min_slope` occurs.
    pub min_at: (f64, f64),
    pub first_violation: Option<(f64, f64)>,
    /// Intervals where Λ is flat to within tolerance (`Λ' = 0`, borderline).
    pub flat_intervals: usize,
    pub passed: bool,
}

/// Checks `Λ' ≥ 0` via difference quotients of `lambda` on `grid`.
pub fn check_monotone_fn<F>(lambda: F, grid: &[f64], eps_mono: f64) -> Result<MonotoneReport>
where
    F: Fn(f64) -> Result<f64>,
{
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "monotonicity grid needs at least two strictly increasing samples".into(),
        ));
    }
    let values = grid
        .iter()
        .map(|&t| lambda(t))
        .collect::<Result<Vec<_>>>()?;
    let mut min_slope = f64::INFINITY;
    let mut min_at = (grid[0], grid[1]);
    let mut first_violation = None;
    let mut flat_intervals = 0;
    for i in 0..grid.len() - 1 {
        let slope = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
        if slope < min_slope {
            min_slope = slope;
            min_at = (grid[i], grid[i + 1]);
        }
        if slope < -eps_mono && first_violation.is_none() {
            first_violation = Some((grid[i], grid[i + 1]));
        }
        if slope.abs() <= eps_mono {
            flat_intervals += 1;
        }
    }
    Ok(MonotoneReport {
        min_slope,
        min_at,
        passed: first_violation.is_none(),
        first_violation,
        flat_intervals,
    })
}

pub fn check_monotone<S: Spacetime + ?Sized>(
    curve: &InitialCurve,
    spacetime: &S,
    grid: &[f64],
    tol: &Tolerances,
) -> Result<MonotoneReport> {
    check_monotone_fn(
        |t| lambda0(curve, spacetime, t, tol.eps_g11),
        grid,
        tol.eps_mono,
    )
}

/// `E`, `L`, `K` and `C` of the characteristic starting at `ϑ`.
pub fn conserved_from_data(
    curve: &InitialCurve,
    params: SchwarzschildParams,
    theta: f64,
) -> Result<ConservedSet> {
    let m = params.m;
    let p = curve.phi(theta);
    let v = curve.psi(theta);
    let r = p[1];
    if !(r > 2.0 * m) {
        return Err(Error::Horizon { r, two_m: 2.0 * m });
    }
    let (s, c) = p[2].sin_cos();
    let e = v[0] * (1.0 - 2.0 * m / r);
    let l = v[3] * r * r * s * s;
    let k = r.powi(4) * (v[2] * v[2] + v[3] * v[3] * s * s * c * c);
    let c_const = (v[1] * v[1] * r.powi(3) + k * (r - 2.0 * m) - 2.0 * m * e * e * r * r)
        / (r * r * (r - 2.0 * m));
    Ok(ConservedSet {
        e,
        l,
        k,
        c: c_const,
    })
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub max_abs_delta: f64,
    pub max_delta_at: f64,
    pub monotone: MonotoneReport,
    /// Largest endpoint mismatch when the curve is periodic.
    pub periodic_mismatch: Option<f64>,
    pub passed: bool,
}

/// Runs the light-likeness and monotonicity checks over `grid`.
pub fn validate<S: Spacetime + ?Sized>(
    curve: &InitialCurve,
    spacetime: &S,
    grid: &[f64],
    tol: &Tolerances,
) -> Result<ValidationReport> {
    let mut max_abs_delta = 0.0f64;
    let mut max_delta_at = grid.first().copied().unwrap_or(curve.domain.0);
    for &t in grid {
        let d = lightlikeness_residual(curve, spacetime, t)?.abs();
        if d > max_abs_delta {
            max_abs_delta = d;
            max_delta_at = t;
        }
    }
    let monotone = check_monotone(curve, spacetime, grid, tol)?;
    let periodic_mismatch = curve.periodic.then(|| curve.periodic_mismatch(spacetime));
    let periodic_ok = periodic_mismatch.is_none_or(|d| d <= 1e-12);
    Ok(ValidationReport {
        passed: max_abs_delta <= tol.eps_delta && monotone.passed && periodic_ok,
        max_abs_delta,
        max_delta_at,
        monotone,
        periodic_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::Schwarzschild;

    fn consts(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn example1(sign: &str) -> InitialCurve {
        let c = consts(&[("m", 1.0), ("r0", 10.0), ("r1", 1.0)]);
        let psi0 = format!("{sign}r1/(1 - 2*m/r0)");
        InitialCurve::from_exprs(
            ["0", "r0", "1.2 + 0.3*sin(theta)", "theta"],
            [psi0.as_str(), "r1", "0", "0"],
            &c,
            (0.0, 6.0),
            false,
        )
        .unwrap()
    }

    fn example2() -> InitialCurve {
        let c = consts(&[("m", 1.0), ("r0", 10.0)]);
        InitialCurve::from_exprs(
            ["0", "r0", "1.1", "theta"],
            [
                "1 + 0.2*sin(theta)",
                "0",
                "sqrt(r0*(r0 - 2*m)*(1 + 0.2*sin(theta))^2)/r0^2",
                "0",
            ],
            &c,
            (0.0, 6.0),
            false,
        )
        .unwrap()
    }

    fn example3(r0: f64) -> InitialCurve {
        let c = consts(&[("m", 1.0), ("r0", r0)]);
        let s = "sqrt(2*m*(r0 - 2*m))/r0^2";
        InitialCurve::from_exprs(
            ["theta", "r0", &format!("{s}*theta"), "0.4"],
            ["1", "0", s, "0"],
            &c,
            (0.5, 3.0),
            false,
        )
        .unwrap()
    }

    #[test]
    fn example1_is_lightlike_with_zero_lambda() {
        let s = Schwarzschild::new(1.0).unwrap();
        for sign in ["", "-"] {
            let c = example1(sign);
            for t in c.grid(25) {
                assert!(lightlikeness_residual(&c, &s, t).unwrap().abs() < 1e-12);
                assert_eq!(lambda0(&c, &s, t, 1e-12).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn example2_is_lightlike_with_zero_lambda() {
        let s = Schwarzschild::new(1.0).unwrap();
        let c = example2();
        for t in c.grid(25) {
            assert!(lightlikeness_residual(&c, &s, t).unwrap().abs() < 1e-12);
            assert_eq!(lambda0(&c, &s, t, 1e-12).unwrap().abs(), 0.0);
        }
    }

    #[test]
    fn example3_has_lambda_minus_one() {
        let s = Schwarzschild::new(1.0).unwrap();
        let c = example3(10.0);
        for t in c.grid(11) {
            assert!(lightlikeness_residual(&c, &s, t).unwrap().abs() < 1e-12);
            assert!((lambda0(&c, &s, t, 1e-12).unwrap() + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn example3_on_the_axis_still_has_equal_induced_components() {
        // At ϑ = 0 the curve touches α = 0; the metric is finite there.
        let s = Schwarzschild::new(1.0).unwrap();
        let c = example3(10.0);
        let im = induced_metric(&s, &c.phi(0.0), &c.psi(0.0), &c.phi_prime(0.0)).unwrap();
        assert!(im.g00 != 0.0);
        assert_eq!(im.g00, im.g01);
        assert_eq!(im.g01, im.g11);
        assert_eq!(im.delta, 0.0);
        assert!((im.g11 + 0.64).abs() < 1e-14);
    }

    #[test]
    fn expanded_delta_and_closed_form_lambda_agree_with_generic_route() {
        let s = Schwarzschild::new(1.3).unwrap();
        let c = InitialCurve::from_exprs(
            ["0.3*theta", "7 + sin(theta)", "1 + 0.2*cos(theta)", "theta"],
            ["1.1", "0.2*cos(theta)", "0.03", "0.05*sin(theta)"],
            &HashMap::new(),
            (0.0, 3.0),
            false,
        )
        .unwrap();
        for t in c.grid(13) {
            let generic = lightlikeness_residual(&c, &s, t).unwrap();
            let expanded = schwarzschild_delta_expanded(&c, 1.3, t);
            assert!(
                (generic - expanded).abs() <= 1e-10 * generic.abs().max(1e-300),
                "{generic} {expanded}"
            );
            let l = lambda0(&c, &s, t, 1e-12).unwrap();
            let closed = schwarzschild_lambda_closed_form(&c, 1.3, t);
            assert!((l - closed).abs() <= 1e-12 * l.abs().max(1.0));
        }
    }

    #[test]
    fn perturbed_velocity_breaks_lightlikeness() {
        let s = Schwarzschild::new(1.0).unwrap();
        let still = InitialCurve::from_exprs(
            ["0", "10", "pi/2", "theta"],
            ["0", "0", "0", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        assert_eq!(lightlikeness_residual(&still, &s, 0.5).unwrap(), 0.0);
        let nudged = InitialCurve::from_exprs(
            ["0", "10", "pi/2", "theta"],
            ["1e-3", "0", "0", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        // Δ = f·δ²·r² > 0: a time-like strip.
        let d = lightlikeness_residual(&nudged, &s, 0.5).unwrap();
        assert!((d - 0.8 * 1e-6 * 100.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_g11_is_reported() {
        let s = Schwarzschild::new(1.0).unwrap();
        let c = InitialCurve::from_exprs(
            ["0", "10", "1", "0"],
            ["1", "0", "0", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        assert!(matches!(
            lambda0(&c, &s, 0.5, 1e-12),
            Err(Error::DegenerateG11 { .. })
        ));
    }

    #[test]
    fn monotone_checks() {
        let grid = uniform_grid((-2.0, 2.0), 41);
        let r = check_monotone_fn(|_| Ok(0.7), &grid, 1e-10).unwrap();
        assert!(r.passed);
        assert_eq!(r.min_slope, 0.0);
        assert_eq!(r.flat_intervals, 40);

        let r = check_monotone_fn(|t| Ok(t), &grid, 1e-10).unwrap();
        assert!(r.passed);

        let r = check_monotone_fn(|t| Ok(-t), &grid, 1e-10).unwrap();
        assert!(!r.passed);
        assert_eq!(r.first_violation, Some((grid[0], grid[1])));

        assert!(check_monotone_fn(|t| Ok(t), &[1.0], 1e-10).is_err());
    }

    #[test]
    fn conserved_sets_of_the_examples() {
        let p = SchwarzschildParams::new(1.0).unwrap();
        for (sign, e) in [("", 1.0), ("-", -1.0)] {
            let cs = conserved_from_data(&example1(sign), p, 0.7).unwrap();
            assert!((cs.e - e).abs() < 1e-15);
            assert_eq!(cs.l, 0.0);
            assert_eq!(cs.k, 0.0);
            assert!((cs.c - 1.0).abs() < 1e-14);
        }

        let c2 = example2();
        for t in [0.0, 1.0, 2.5] {
            let f = 1.0 + 0.2 * f64::sin(t);
            let cs = conserved_from_data(&c2, p, t).unwrap();
            assert!((cs.e - 0.8 * f).abs() < 1e-14);
            assert_eq!(cs.l, 0.0);
            assert!((cs.k - 80.0 * f * f).abs() < 1e-12);
        }

        let cs = conserved_from_data(&example3(10.0), p, 1.0).unwrap();
        assert!((cs.e - 0.8).abs() < 1e-15);
        assert_eq!(cs.l, 0.0);
        assert!((cs.k - 16.0).abs() < 1e-12);
    }

    #[test]
    fn conserved_rejects_data_inside_horizon() {
        let p = SchwarzschildParams::new(1.0).unwrap();
        let c = InitialCurve::from_exprs(
            ["0", "1.5", "1", "theta"],
            ["1", "0", "0", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        assert!(matches!(
            conserved_from_data(&c, p, 0.0),
            Err(Error::Horizon { .. })
        ));
    }

    #[test]
    fn periodic_mismatch_respects_angular_period() {
        let s = Schwarzschild::new(1.0).unwrap();
        let c = InitialCurve::from_exprs(
            ["0", "10", "1.2 + 0.3*sin(theta)", "theta"],
            ["1.25", "1", "0", "0"],
            &consts(&[]),
            (0.0, std::f64::consts::TAU),
            true,
        )
        .unwrap();
        assert!(c.periodic_mismatch(&s) < 1e-12);
    }

    #[test]
    fn sampled_curve_uses_spline_derivatives() {
        let thetas = uniform_grid((0.0, 2.0), 41);
        let phi: Vec<Vector> = thetas
            .iter()
            .map(|&t| [0.0, 10.0, 1.0 + 0.1 * t.sin(), t])
            .collect();
        let psi: Vec<Vector> = thetas.iter().map(|_| [1.25, 1.0, 0.0, 0.0]).collect();
        let c = InitialCurve::from_samples(&thetas, &phi, &psi, false).unwrap();
        let d = c.phi_prime(0.77);
        assert!((d[2] - 0.1 * 0.77f64.cos()).abs() < 1e-6);
        assert!((d[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fd_fallback_for_plain_functions() {
        let comp = CurveComponent::function(|t: f64| t.sin());
        assert!((comp.derivative(0.4) - 0.4f64.cos()).abs() < 1e-11);
    }
}
