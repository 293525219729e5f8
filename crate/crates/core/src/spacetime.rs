//! Ambient Lorentzian metrics, their connections, and induced metrics of
//! two-dimensional worldsheets.
//!
//! Coordinates are always ordered `(x⁰, x¹, x², x³)`; for the spherical charts
//! this is `(τ, r, α, β)`. Geometric units `G = c = 1`, so the mass `m` carries
//! length units and the horizon sits at `r = 2m`.

use std::sync::Arc;

use nalgebra::Matrix4;

use crate::error::{DomainViolation, Error, Result};
use crate::geodesic::{EventKind, Guards};
use crate::initial_data::ConservedSet;

pub const DIM: usize = 4;

pub type Vector = [f64; DIM];
pub type MetricMatrix = [[f64; DIM]; DIM];
/// `gamma[mu][nu][rho]` = Γ^μ_{νρ}.
pub type Christoffel = [[[f64; DIM]; DIM]; DIM];

/// Relative margin kept from the horizon when evaluating the metric.
pub const HORIZON_MARGIN: f64 = 1e-10;

/// A Lorentzian metric on a single coordinate chart.
///
/// `metric_at` is defined wherever the metric components are finite;
/// `christoffel_at` may impose a stricter domain (the polar axis of a
/// spherical chart has finite metric but singular connection).
pub trait Spacetime: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize {
        DIM
    }

    fn coordinate_names(&self) -> [&'static str; DIM];

    /// Period of a coordinate when it is an angle, used to compare the two
    /// endpoints of periodic initial curves.
    fn coordinate_period(&self, _index: usize) -> Option<f64> {
        None
    }

    /// Full chart check used for connections and integration.
    fn check_domain(&self, x: &Vector) -> Result<(), DomainViolation>;

    fn metric_at(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation>;

    fn christoffel_at(&self, x: &Vector) -> Result<Christoffel, DomainViolation>;

    /// Signed distances to the chart boundaries; non-positive means the
    /// corresponding integration event fired.
    fn event_margins(&self, _x: &Vector, _guards: &Guards) -> Vec<(EventKind, f64)> {
        Vec::new()
    }

    /// First integrals of a geodesic through `(y, v)`, when the metric has the
    /// static spherically symmetric form that admits them.
    fn first_integrals(&self, _y: &Vector, _v: &Vector) -> Option<ConservedSet> {
        None
    }

    /// Mass parameter, for spherical black-hole charts.
    fn mass(&self) -> Option<f64> {
        None
    }
}

impl<S: Spacetime + ?Sized> Spacetime for Arc<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn coordinate_names(&self) -> [&'static str; DIM] {
        (**self).coordinate_names()
    }
    fn coordinate_period(&self, index: usize) -> Option<f64> {
        (**self).coordinate_period(index)
    }
    fn check_domain(&self, x: &Vector) -> Result<(), DomainViolation> {
        (**self).check_domain(x)
    }
    fn metric_at(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        (**self).metric_at(x)
    }
    fn christoffel_at(&self, x: &Vector) -> Result<Christoffel, DomainViolation> {
        (**self).christoffel_at(x)
    }
    fn event_margins(&self, x: &Vector, guards: &Guards) -> Vec<(EventKind, f64)> {
        (**self).event_margins(x, guards)
    }
    fn first_integrals(&self, y: &Vector, v: &Vector) -> Option<ConservedSet> {
        (**self).first_integrals(y, v)
    }
    fn mass(&self) -> Option<f64> {
        (**self).mass()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildParams {
    pub m: f64,
}

impl SchwarzschildParams {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Schwarzschild mass must be positive, got {m}"
            )));
        }
        Ok(Self { m })
    }
}

const SPHERICAL_NAMES: [&str; DIM] = ["tau", "r", "alpha", "beta"];

/// Static spherically symmetric chart `diag(−f, 1/f, r², r² sin²α)` with
/// `f = 1 − 2m/r`. `m = 0` is flat space in spherical coordinates.
#[derive(Debug, Clone)]
struct SphericalChart {
    m: f64,
}

impl SphericalChart {
    fn check_radius(&self, x: &Vector) -> Result<(), DomainViolation> {
        let r = x[1];
        let bound = if self.m > 0.0 {
            2.0 * self.m * (1.0 + HORIZON_MARGIN)
        } else {
            0.0
        };
        if !(r > bound) {
            return Err(DomainViolation {
                coordinate: 1,
                name: "r",
                value: r,
                reason: if self.m > 0.0 {
                    "r must exceed the horizon radius 2m"
                } else {
                    "r must be positive"
                },
            });
        }
        Ok(())
    }

    fn check_axis(&self, x: &Vector) -> Result<(), DomainViolation> {
        if x[2].sin() == 0.0 || !x[2].is_finite() {
            return Err(DomainViolation {
                coordinate: 2,
                name: "alpha",
                value: x[2],
                reason: "sin(alpha) must be non-zero",
            });
        }
        Ok(())
    }

    fn metric(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        self.check_radius(x)?;
        let r = x[1];
        let f = 1.0 - 2.0 * self.m / r;
        let s = x[2].sin();
        let mut g = [[0.0; DIM]; DIM];
        g[0][0] = -f;
        g[1][1] = 1.0 / f;
        g[2][2] = r * r;
        g[3][3] = r * r * s * s;
        Ok(g)
    }

    fn christoffel(&self, x: &Vector) -> Result<Christoffel, DomainViolation> {
        self.check_radius(x)?;
        self.check_axis(x)?;
        let m = self.m;
        let r = x[1];
        let (s, c) = x[2].sin_cos();
        let mut gam = [[[0.0; DIM]; DIM]; DIM];

        let a = m / (r * (r - 2.0 * m));
        gam[0][0][1] = a;
        gam[0][1][0] = a;

        gam[1][0][0] = m * (r - 2.0 * m) / (r * r * r);
        gam[1][1][1] = -a;
        gam[1][2][2] = -(r - 2.0 * m);
        gam[1][3][3] = -(r - 2.0 * m) * s * s;

        gam[2][1][2] = 1.0 / r;
        gam[2][2][1] = 1.0 / r;
        gam[2][3][3] = -s * c;

        gam[3][1][3] = 1.0 / r;
        gam[3][3][1] = 1.0 / r;
        gam[3][2][3] = c / s;
        gam[3][3][2] = c / s;
        Ok(gam)
    }

    fn margins(&self, x: &Vector, guards: &Guards) -> Vec<(EventKind, f64)> {
        let horizon = if self.m > 0.0 {
            x[1] - 2.0 * self.m * (1.0 + guards.eps_horizon)
        } else {
            x[1]
        };
        vec![
            (EventKind::Horizon, horizon),
            (EventKind::Axis, x[2].sin().abs() - guards.eps_axis),
        ]
    }

    fn integrals(&self, y: &Vector, v: &Vector) -> ConservedSet {
        let m = self.m;
        let r = y[1];
        let f = 1.0 - 2.0 * m / r;
        let (s, c) = y[2].sin_cos();
        let e = v[0] * f;
        let l = v[3] * r * r * s * s;
        let k = r.powi(4) * v[2] * v[2] + l * l * (c * c) / (s * s);
        // Radial first integral solved for C.
        let c_const = (v[1] * v[1] - 2.0 * m * e * e / r) / f + k / (r * r);
        ConservedSet {
            e,
            l,
            k,
            c: c_const,
        }
    }
}

/// Schwarzschild black hole of mass `m` in coordinates `(τ, r, α, β)`.
#[derive(Debug, Clone)]
pub struct Schwarzschild {
    params: SchwarzschildParams,
    chart: SphericalChart,
}

/// Builds the Schwarzschild spacetime for the given mass.
pub fn schwarzschild(params: SchwarzschildParams) -> Schwarzschild {
    Schwarzschild {
        params,
        chart: SphericalChart { m: params.m },
    }
}

impl Schwarzschild {
    pub fn new(m: f64) -> Result<Self> {
        Ok(schwarzschild(SchwarzschildParams::new(m)?))
    }

    pub fn params(&self) -> SchwarzschildParams {
        self.params
    }

    pub fn m(&self) -> f64 {
        self.params.m
    }
}

impl Spacetime for Schwarzschild {
    fn name(&self) -> &str {
        "schwarzschild"
    }
    fn coordinate_names(&self) -> [&'static str; DIM] {
        SPHERICAL_NAMES
    }
    fn coordinate_period(&self, index: usize) -> Option<f64> {
        (index == 3).then_some(std::f64::consts::TAU)
    }
    fn check_domain(&self, x: &Vector) -> Result<(), DomainViolation> {
        self.chart.check_radius(x)?;
        self.chart.check_axis(x)
    }
    fn metric_at(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        self.chart.metric(x)
    }
    fn christoffel_at(&self, x: &Vector) -> Result<Christoffel, DomainViolation> {
        self.chart.christoffel(x)
    }
    fn event_margins(&self, x: &Vector, guards: &Guards) -> Vec<(EventKind, f64)> {
        self.chart.margins(x, guards)
    }
    fn first_integrals(&self, y: &Vector, v: &Vector) -> Option<ConservedSet> {
        Some(self.chart.integrals(y, v))
    }
    fn mass(&self) -> Option<f64> {
        Some(self.params.m)
    }
}

/// Flat spacetime in spherical coordinates `(τ, r, α, β)`.
#[derive(Debug, Clone)]
pub struct MinkowskiSpherical {
    chart: SphericalChart,
}

impl Default for MinkowskiSpherical {
    fn default() -> Self {
        Self {
            chart: SphericalChart { m: 0.0 },
        }
    }
}

impl Spacetime for MinkowskiSpherical {
    fn name(&self) -> &str {
        "minkowski_spherical"
    }
    fn coordinate_names(&self) -> [&'static str; DIM] {
        SPHERICAL_NAMES
    }
    fn coordinate_period(&self, index: usize) -> Option<f64> {
        (index == 3).then_some(std::f64::consts::TAU)
    }
    fn check_domain(&self, x: &Vector) -> Result<(), DomainViolation> {
        self.chart.check_radius(x)?;
        self.chart.check_axis(x)
    }
    fn metric_at(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        self.chart.metric(x)
    }
    fn christoffel_at(&self, x: &Vector) -> Result<Christoffel, DomainViolation> {
        self.chart.christoffel(x)
    }
    fn event_margins(&self, x: &Vector, guards: &Guards) -> Vec<(EventKind, f64)> {
        self.chart.margins(x, guards)
    }
    fn first_integrals(&self, y: &Vector, v: &Vector) -> Option<ConservedSet> {
        Some(self.chart.integrals(y, v))
    }
}

/// Flat spacetime in Cartesian coordinates `(t, x, y, z)`; the connection
/// vanishes identically.
#[derive(Debug, Clone, Default)]
pub struct Minkowski;

impl Spacetime for Minkowski {
    fn name(&self) -> &str {
        "minkowski"
    }
    fn coordinate_names(&self) -> [&'static str; DIM] {
        ["t", "x", "y", "z"]
    }
    fn check_domain(&self, _x: &Vector) -> Result<(), DomainViolation> {
        Ok(())
    }
    fn metric_at(&self, _x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        let mut g = [[0.0; DIM]; DIM];
        g[0][0] = -1.0;
        g[1][1] = 1.0;
        g[2][2] = 1.0;
        g[3][3] = 1.0;
        Ok(g)
    }
    fn christoffel_at(&self, _x: &Vector) -> Result<Christoffel, DomainViolation> {
        Ok([[[0.0; DIM]; DIM]; DIM])
    }
}

type MetricFn = dyn Fn(&Vector) -> Result<MetricMatrix, DomainViolation> + Send + Sync;

/// A user-supplied metric whose connection is obtained by central differences.
pub struct MetricFromFn {
    name: String,
    metric: Arc<MetricFn>,
}

impl MetricFromFn {
    pub fn new(
        name: impl Into<String>,
        metric: impl Fn(&Vector) -> Result<MetricMatrix, DomainViolation> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            metric: Arc::new(metric),
        }
    }
}

impl Spacetime for MetricFromFn {
    fn name(&self) -> &str {
        &self.name
    }
    fn coordinate_names(&self) -> [&'static str; DIM] {
        ["x0", "x1", "x2", "x3"]
    }
    fn check_domain(&self, x: &Vector) -> Result<(), DomainViolation> {
        (self.metric)(x).map(|_| ())
    }
    fn metric_at(&self, x: &Vector) -> Result<MetricMatrix, DomainViolation> {
        (self.metric)(x)
    }
    fn christoffel_at(&self, x: &Vector) -> Result<Christoffel, DomainViolation> {
        christoffel_fd(self, x, None).map_err(|e| match e {
            Error::Domain(d) | Error::MarginViolation(d) => d,
            _ => DomainViolation {
                coordinate: 0,
                name: "x0",
                value: x[0],
                reason: "metric is singular",
            },
        })
    }
}

/// Default central-difference step for coordinate `x`.
pub fn default_fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Christoffel symbols of the second kind from central differences of the
/// metric. `h = None` selects [`default_fd_step`] per coordinate.
pub fn christoffel_fd<S: Spacetime + ?Sized>(
    spacetime: &S,
    x: &Vector,
    h: Option<f64>,
) -> Result<Christoffel> {
    let g = spacetime.metric_at(x)?;
    let inv = invert_metric(&g).ok_or(Error::SingularMetric { x: *x })?;

    // dg[s][a][b] = ∂_s g_ab
    let mut dg = [[[0.0; DIM]; DIM]; DIM];
    for s in 0..DIM {
        let step = h.unwrap_or_else(|| default_fd_step(x[s]));
        let mut xp = *x;
        let mut xm = *x;
        xp[s] += step;
        xm[s] -= step;
        let gp = spacetime.metric_at(&xp).map_err(Error::MarginViolation)?;
        let gm = spacetime.metric_at(&xm).map_err(Error::MarginViolation)?;
        let width = xp[s] - xm[s];
        for a in 0..DIM {
            for b in 0..DIM {
                dg[s][a][b] = (gp[a][b] - gm[a][b]) / width;
            }
        }
    }

    let mut gam = [[[0.0; DIM]; DIM]; DIM];
    for mu in 0..DIM {
        for nu in 0..DIM {
            for rho in nu..DIM {
                let mut acc = 0.0;
                for sigma in 0..DIM {
                    let lower = dg[nu][sigma][rho] + dg[rho][sigma][nu] - dg[sigma][nu][rho];
                    acc += inv[mu][sigma] * lower;
                }
                gam[mu][nu][rho] = 0.5 * acc;
                gam[mu][rho][nu] = 0.5 * acc;
            }
        }
    }
    Ok(gam)
}

fn invert_metric(g: &MetricMatrix) -> Option<MetricMatrix> {
    let m = Matrix4::from_fn(|i, j| g[i][j]);
    let inv = m.try_inverse()?;
    let mut out = [[0.0; DIM]; DIM];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = inv[(i, j)];
        }
    }
    out.iter().flatten().all(|v| v.is_finite()).then_some(out)
}

/// `g(u, v)` for a metric matrix.
pub fn inner(g: &MetricMatrix, u: &Vector, v: &Vector) -> f64 {
    let mut acc = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            acc += g[a][b] * u[a] * v[b];
        }
    }
    acc
}

/// Components of the metric induced on a worldsheet with tangents `x_t`, `x_θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedMetric {
    pub g00: f64,
    pub g01: f64,
    pub g11: f64,
    /// `g01² − g00·g11`; positive on time-like, negative on space-like sheets.
    pub delta: f64,
    /// `g01² + |g00·g11|` with every metric term taken in absolute value, so
    /// that it stays finite when the components themselves cancel to zero.
    pub magnitude: f64,
}

impl InducedMetric {
    pub fn from_components(g00: f64, g01: f64, g11: f64) -> Self {
        Self {
            g00,
            g01,
            g11,
            delta: g01 * g01 - g00 * g11,
            magnitude: g01 * g01 + (g00 * g11).abs(),
        }
    }

    /// Magnitude against which `delta` is judged to be zero.
    pub fn scale(&self) -> f64 {
        self.magnitude
            .max(self.g01 * self.g01 + (self.g00 * self.g11).abs())
    }
}

/// Induced metric of the tangents `x_t`, `x_θ` at `x`.
pub fn induced_metric<S: Spacetime + ?Sized>(
    spacetime: &S,
    x: &Vector,
    xt: &Vector,
    xtheta: &Vector,
) -> Result<InducedMetric> {
    let g = spacetime.metric_at(x)?;
    let mut im = InducedMetric::from_components(
        inner(&g, xt, xt),
        inner(&g, xt, xtheta),
        inner(&g, xtheta, xtheta),
    );
    let abs_g = g.map(|row| row.map(f64::abs));
    let (at, ath) = (xt.map(f64::abs), xtheta.map(f64::abs));
    let (m00, m01, m11) = (
        inner(&abs_g, &at, &at),
        inner(&abs_g, &at, &ath),
        inner(&abs_g, &ath, &ath),
    );
    im.magnitude = m01 * m01 + m00 * m11;
    Ok(im)
}
