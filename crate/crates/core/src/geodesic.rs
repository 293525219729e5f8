//! Geodesics `ÿ^μ + Γ^μ_{νρ} ẏ^ν ẏ^ρ = 0` integrated with an adaptive
//! Dormand–Prince 5(4) scheme, continuous output, boundary events and
//! first-integral monitoring.
//!
//! Each characteristic ϑ of the worldsheet evolves independently along one of
//! these curves; the parameter `t` is the worldsheet time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::{ConservedSet, InitialCurve};
use crate::spacetime::{inner, Schwarzschild, SchwarzschildParams, Spacetime, Vector, DIM};

const N: usize = 2 * DIM;
type Phase = [f64; N];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Horizon,
    Axis,
    StepFailure,
    TMax,
}

impl EventKind {
    /// Horizon, axis and step failures end a trajectory before `t_end`.
    pub fn is_terminal(self) -> bool {
        !matches!(self, EventKind::TMax)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Horizon => "horizon",
            EventKind::Axis => "axis",
            EventKind::StepFailure => "step_failure",
            EventKind::TMax => "t_max",
        })
    }
}

/// Distances from the chart boundaries at which integration stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guards {
    /// Stop when `r ≤ 2m(1 + eps_horizon)`.
    pub eps_horizon: f64,
    /// Stop when `|sin α| ≤ eps_axis`.
    pub eps_axis: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            eps_horizon: 1e-8,
            eps_axis: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub guards: Guards,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 200_000,
            guards: Guards::default(),
        }
    }
}

/// How the initial tangent of each characteristic is lifted from the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityLift {
    /// `ẏ(0) = ψ(ϑ)`.
    #[default]
    AsGiven,
    /// `ẏ(0) = ψ(ϑ) + Λ(ϑ)·φ'(ϑ)`, the derivative of `x` along the
    /// characteristic direction `∂_t + λ∂_θ`.
    AlongCharacteristic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub y: Vector,
    pub v: Vector,
}

impl GeodesicState {
    pub fn new(t: f64, y: Vector, v: Vector) -> Self {
        Self { t, y, v }
    }

    /// Start of the characteristic through `ϑ`; `lambda` is `Λ(ϑ)` and is
    /// only used by [`VelocityLift::AlongCharacteristic`].
    pub fn from_curve(
        curve: &InitialCurve,
        vartheta: f64,
        lambda: f64,
        lift: VelocityLift,
    ) -> Self {
        let y = curve.phi(vartheta);
        let mut v = curve.psi(vartheta);
        if lift == VelocityLift::AlongCharacteristic {
            let dp = curve.phi_prime(vartheta);
            for i in 0..DIM {
                v[i] += lambda * dp[i];
            }
        }
        Self { t: 0.0, y, v }
    }

    fn phase(&self) -> Phase {
        let mut p = [0.0; N];
        p[..DIM].copy_from_slice(&self.y);
        p[DIM..].copy_from_slice(&self.v);
        p
    }

    fn from_phase(t: f64, p: &Phase) -> Self {
        let mut y = [0.0; DIM];
        let mut v = [0.0; DIM];
        y.copy_from_slice(&p[..DIM]);
        v.copy_from_slice(&p[DIM..]);
        Self { t, y, v }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub t: f64,
    pub state: GeodesicState,
}

/// Continuous extension of one accepted step.
#[derive(Debug, Clone)]
struct DenseSegment {
    t0: f64,
    h: f64,
    /// Valid up to this time (shorter than `t0 + h` for a step cut by an event).
    t_stop: f64,
    coeffs: [Phase; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Phase {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.coeffs;
        std::array::from_fn(|i| {
            c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])))
        })
    }
}

#[derive(Debug, Clone)]
pub struct GeodesicTrajectory {
    pub states: Vec<GeodesicState>,
    pub events: Vec<Event>,
    /// First integrals at every entry of `states`; empty when the spacetime
    /// does not provide them.
    pub conserved: Vec<ConservedSet>,
    segments: Vec<DenseSegment>,
}

impl GeodesicTrajectory {
    pub fn t_start(&self) -> f64 {
        self.states[0].t
    }

    pub fn t_last(&self) -> f64 {
        self.states[self.states.len() - 1].t
    }

    /// The terminal event, if the trajectory stopped before `t_end`.
    pub fn termination(&self) -> Option<&Event> {
        self.events.iter().find(|e| e.kind.is_terminal())
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.t_start() && t <= self.t_last()
    }

    /// Dense-output state at `t`, or `None` outside the integrated span.
    pub fn state_at(&self, t: f64) -> Option<GeodesicState> {
        if !self.covers(t) {
            return None;
        }
        if self.segments.is_empty() || t == self.t_start() {
            return Some(self.states[0]);
        }
        let idx = self
            .segments
            .partition_point(|s| s.t0 <= t)
            .saturating_sub(1);
        let seg = &self.segments[idx];
        if t >= seg.t_stop {
            // The terminal state is stored exactly.
            if idx + 1 == self.segments.len() {
                return self.states.last().copied();
            }
        }
        Some(GeodesicState::from_phase(t, &seg.eval(t)))
    }
}

/// Acceleration `a^μ = −Γ^μ_{νρ} v^ν v^ρ`.
pub fn geodesic_rhs<S: Spacetime + ?Sized>(spacetime: &S, state: &GeodesicState) -> Result<Vector> {
    let gam = spacetime.christoffel_at(&state.y)?;
    let v = &state.v;
    let mut a = [0.0; DIM];
    for (mu, am) in a.iter_mut().enumerate() {
        let mut acc = 0.0;
        for nu in 0..DIM {
            for rho in 0..DIM {
                acc += gam[mu][nu][rho] * v[nu] * v[rho];
            }
        }
        *am = -acc;
    }
    Ok(a)
}

/// `g̃(v, v)` of the tangent.
pub fn tangent_norm<S: Spacetime + ?Sized>(spacetime: &S, state: &GeodesicState) -> Result<f64> {
    let g = spacetime.metric_at(&state.y)?;
    Ok(inner(&g, &state.v, &state.v))
}

fn phase_rhs<S: Spacetime + ?Sized>(spacetime: &S, p: &Phase) -> Option<Phase> {
    let st = GeodesicState::from_phase(0.0, p);
    let a = geodesic_rhs(spacetime, &st).ok()?;
    let mut out = [0.0; N];
    out[..DIM].copy_from_slice(&st.v);
    out[DIM..].copy_from_slice(&a);
    out.iter().all(|x| x.is_finite()).then_some(out)
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes c_i
// are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn combo(y: &Phase, h: f64, terms: &[(f64, &Phase)]) -> Phase {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn error_norm(y0: &Phase, y1: &Phase, err: &Phase, opts: &SolverOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sk = opts.abs_tol + opts.rel_tol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sk).powi(2);
    }
    (acc / N as f64).sqrt()
}

fn min_margin<S: Spacetime + ?Sized>(
    spacetime: &S,
    p: &Phase,
    guards: &Guards,
) -> Option<(EventKind, f64)> {
    let y: Vector = std::array::from_fn(|i| p[i]);
    spacetime
        .event_margins(&y, guards)
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

struct Recorder<'a, S: ?Sized> {
    spacetime: &'a S,
    traj: GeodesicTrajectory,
}

impl<S: Spacetime + ?Sized> Recorder<'_, S> {
    fn push(&mut self, state: GeodesicState) {
        if let Some(c) = self.spacetime.first_integrals(&state.y, &state.v) {
            self.traj.conserved.push(c);
        }
        self.traj.states.push(state);
    }

    fn event(&mut self, kind: EventKind, state: GeodesicState) {
        self.traj.events.push(Event {
            kind,
            t: state.t,
            state,
        });
    }
}

/// Integrates the geodesic from `state0` to `t_end`, stopping at the first
/// boundary event.
pub fn integrate<S: Spacetime + ?Sized>(
    spacetime: &S,
    state0: GeodesicState,
    t_end: f64,
    opts: &SolverOptions,
) -> Result<GeodesicTrajectory> {
    if !(t_end > state0.t) {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} must exceed the initial time {}",
            state0.t
        )));
    }
    spacetime.check_domain(&state0.y)?;
    let mut rec = Recorder {
        spacetime,
        traj: GeodesicTrajectory {
            states: Vec::new(),
            events: Vec::new(),
            conserved: Vec::new(),
            segments: Vec::new(),
        },
    };
    rec.push(state0);

    let mut y = state0.phase();
    let mut t = state0.t;
    let mut k1 = phase_rhs(spacetime, &y).ok_or_else(|| {
        Error::InvalidParameter(
            "geodesic right-hand side is not finite at the initial state".into(),
        )
    })?;

    if let Some((kind, margin)) = min_margin(spacetime, &y, &opts.guards) {
        if margin <= 0.0 {
            rec.event(kind, state0);
            return Ok(rec.traj);
        }
    }

    let span = t_end - t;
    let mut h = initial_step(spacetime, &y, &k1, opts).min(span);
    let h_min = 1e-14 * span.max(t.abs());
    let mut facold: f64 = 1e-4;
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            let last = *rec.traj.states.last().unwrap();
            rec.event(EventKind::StepFailure, last);
            return Ok(rec.traj);
        }
        steps += 1;
        let last_step = t + h >= t_end;
        if last_step {
            h = t_end - t;
        }

        let Some(attempt) = dp_step(spacetime, &y, &k1, h) else {
            // A stage left the chart: shrink and retry.
            h *= 0.25;
            if h < h_min {
                let last = *rec.traj.states.last().unwrap();
                let kind = min_margin(spacetime, &y, &opts.guards)
                    .filter(|(_, m)| *m < 1e-6)
                    .map(|(k, _)| k)
                    .unwrap_or(EventKind::StepFailure);
                rec.event(kind, last);
                return Ok(rec.traj);
            }
            continue;
        };

        let err = error_norm(&y, &attempt.y1, &attempt.err, opts);
        let fac11 = err.powf(0.17);
        if err > 1.0 || !err.is_finite() {
            h /= if err.is_finite() {
                (fac11 / 0.9).min(5.0)
            } else {
                4.0
            };
            if h < h_min {
                let last = *rec.traj.states.last().unwrap();
                rec.event(EventKind::StepFailure, last);
                return Ok(rec.traj);
            }
            continue;
        }

        let t_new = if last_step { t_end } else { t + h };
        let seg = DenseSegment {
            t0: t,
            h,
            t_stop: t_new,
            coeffs: attempt.dense(&y, h),
        };

        if let Some((kind, margin)) = min_margin(spacetime, &attempt.y1, &opts.guards) {
            if margin <= 0.0 {
                let t_event = locate_event(spacetime, &seg, &opts.guards, t, t_new);
                let p = seg.eval(t_event);
                let state = GeodesicState::from_phase(t_event, &p);
                rec.traj.segments.push(DenseSegment {
                    t_stop: t_event,
                    ..seg
                });
                rec.push(state);
                rec.event(kind, state);
                return Ok(rec.traj);
            }
        }

        rec.traj.segments.push(seg);
        y = attempt.y1;
        k1 = attempt.k7;
        t = t_new;
        rec.push(GeodesicState::from_phase(t, &y));
        if last_step {
            let last = *rec.traj.states.last().unwrap();
            rec.event(EventKind::TMax, last);
            return Ok(rec.traj);
        }

        let fac = (fac11 / facold.powf(0.04) / 0.9).clamp(0.1, 5.0);
        facold = err.max(1e-4);
        h /= fac;
    }
}

/// Bisection on the dense output for the last time with positive margin.
fn locate_event<S: Spacetime + ?Sized>(
    spacetime: &S,
    seg: &DenseSegment,
    guards: &Guards,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    let margin = |t: f64| {
        min_margin(spacetime, &seg.eval(t), guards)
            .map(|(_, m)| m)
            .unwrap_or(1.0)
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if margin(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

struct Attempt {
    y1: Phase,
    err: Phase,
    k: [Phase; 7],
    k7: Phase,
}

impl Attempt {
    fn dense(&self, y0: &Phase, h: f64) -> [Phase; 5] {
        let [k1, _, k3, k4, k5, k6, k7] = &self.k;
        let r1 = *y0;
        let r2: Phase = std::array::from_fn(|i| self.y1[i] - y0[i]);
        let r3: Phase = std::array::from_fn(|i| h * k1[i] - r2[i]);
        let r4: Phase = std::array::from_fn(|i| r2[i] - h * k7[i] - r3[i]);
        let r5: Phase = std::array::from_fn(|i| {
            h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
        });
        [r1, r2, r3, r4, r5]
    }
}

fn dp_step<S: Spacetime + ?Sized>(spacetime: &S, y: &Phase, k1: &Phase, h: f64) -> Option<Attempt> {
    let f = |p: &Phase| phase_rhs(spacetime, p);
    let k2 = f(&combo(y, h, &[(A21, k1)]))?;
    let k3 = f(&combo(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(&combo(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(&combo(
        y,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ))?;
    let k6 = f(&combo(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let y1 = combo(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(&y1)?;
    let err: Phase = std::array::from_fn(|i| {
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    Some(Attempt {
        y1,
        err,
        k: [*k1, k2, k3, k4, k5, k6, k7],
        k7,
    })
}

fn initial_step<S: Spacetime + ?Sized>(
    spacetime: &S,
    y: &Phase,
    f0: &Phase,
    opts: &SolverOptions,
) -> f64 {
    let norm = |v: &Phase| {
        let mut acc = 0.0;
        for i in 0..N {
            let sk = opts.abs_tol + opts.rel_tol * y[i].abs();
            acc += (v[i] / sk).powi(2);
        }
        (acc / N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = combo(y, h0, &[(1.0, f0)]);
    let d2 = match phase_rhs(spacetime, &y1) {
        Some(f1) => {
            let diff: Phase = std::array::from_fn(|i| f1[i] - f0[i]);
            norm(&diff) / h0
        }
        None => return h0,
    };
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drift {
    pub initial: f64,
    pub max_abs: f64,
    /// `max_abs / |initial|`, or `max_abs` when the initial value is zero.
    pub relative: f64,
}

impl Drift {
    fn from_series(values: impl Iterator<Item = f64>) -> Self {
        let mut initial = None;
        let mut max_abs = 0.0f64;
        for v in values {
            let v0 = *initial.get_or_insert(v);
            max_abs = max_abs.max((v - v0).abs());
        }
        let initial = initial.unwrap_or(0.0);
        // Integrals that vanish analytically come out as rounding noise.
        let relative = if initial.abs() > 1e-12 {
            max_abs / initial.abs()
        } else {
            max_abs
        };
        Self {
            initial,
            max_abs,
            relative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftReport {
    pub e: Drift,
    pub l: Drift,
    pub k: Drift,
    pub c: Drift,
}

impl DriftReport {
    /// Largest relative drift among `E`, `L`, `K`.
    pub fn max_relative(&self) -> f64 {
        self.e.relative.max(self.l.relative).max(self.k.relative)
    }
}

/// Recomputes `E`, `L`, `K`, `C` at every node of a Schwarzschild trajectory.
pub fn conserved_along(
    params: SchwarzschildParams,
    trajectory: &GeodesicTrajectory,
) -> DriftReport {
    let s = Schwarzschild::new(params.m).expect("validated mass");
    let sets: Vec<ConservedSet> = trajectory
        .states
        .iter()
        .filter_map(|st| s.first_integrals(&st.y, &st.v))
        .collect();
    DriftReport {
        e: Drift::from_series(sets.iter().map(|c| c.e)),
        l: Drift::from_series(sets.iter().map(|c| c.l)),
        k: Drift::from_series(sets.iter().map(|c| c.k)),
        c: Drift::from_series(sets.iter().map(|c| c.c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{Minkowski, MinkowskiSpherical};
    use std::f64::consts::FRAC_PI_2;

    fn sch() -> Schwarzschild {
        Schwarzschild::new(1.0).unwrap()
    }

    #[test]
    fn flat_acceleration_vanishes() {
        let st = GeodesicState::new(0.0, [0.0, 1.0, 2.0, 3.0], [1.0, 0.3, -0.2, 0.1]);
        assert_eq!(geodesic_rhs(&Minkowski, &st).unwrap(), [0.0; 4]);
    }

    #[test]
    fn photon_sphere_balance() {
        let st = GeodesicState::new(
            0.0,
            [0.0, 3.0, FRAC_PI_2, 0.0],
            [1.0, 0.0, 1.0 / 27f64.sqrt(), 0.0],
        );
        let a = geodesic_rhs(&sch(), &st).unwrap();
        assert!(a[1].abs() < 1e-15, "{a:?}");
    }

    #[test]
    fn r4_circular_balance() {
        for sign in [1.0, -1.0] {
            let st =
                GeodesicState::new(0.0, [0.0, 4.0, FRAC_PI_2, 0.0], [1.0, 0.0, sign / 8.0, 0.0]);
            let a = geodesic_rhs(&sch(), &st).unwrap();
            assert!(a[1].abs() < 1e-15, "{a:?}");
        }
    }

    #[test]
    fn rhs_matches_explicit_schwarzschild_equations() {
        let m = 1.3;
        let s = Schwarzschild::new(m).unwrap();
        let y = [0.4, 5.5, 1.1, 0.3];
        let v = [1.2, -0.3, 0.07, 0.05];
        let a = geodesic_rhs(&s, &GeodesicState::new(0.0, y, v)).unwrap();
        let (r, al) = (y[1], y[2]);
        let [tt, rt, at, bt] = v;
        let expect = [
            -2.0 * m / (r * (r - 2.0 * m)) * tt * rt,
            (r - 2.0 * m) * al.sin().powi(2) * bt * bt
                + (r - 2.0 * m) * at * at
                + m / (r * (r - 2.0 * m)) * rt * rt
                - m * (r - 2.0 * m) / r.powi(3) * tt * tt,
            -2.0 / r * rt * at + 0.5 * (2.0 * al).sin() * bt * bt,
            -2.0 / r * rt * bt - 2.0 * al.cos() / al.sin() * at * bt,
        ];
        for i in 0..4 {
            assert!(
                (a[i] - expect[i]).abs() < 1e-12 * (1.0 + expect[i].abs()),
                "{i}"
            );
        }
    }

    #[test]
    fn radial_null_line() {
        let y0 = [0.0, 10.0, 1.2, 0.0];
        let v0 = [1.0 / 0.8, 1.0, 0.0, 0.0];
        let traj = integrate(
            &sch(),
            GeodesicState::new(0.0, y0, v0),
            20.0,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.events.last().unwrap().kind, EventKind::TMax);
        let worst = traj
            .states
            .iter()
            .map(|s| (s.y[1] - (10.0 + s.t)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst:e}");
        // Dense output between nodes.
        for k in 0..=200 {
            let t = 0.1 * k as f64;
            let st = traj.state_at(t).unwrap();
            assert!((st.y[1] - 10.0 - t).abs() < 1e-8, "t={t}");
        }
        assert!(
            tangent_norm(&sch(), &traj.states[traj.states.len() / 2])
                .unwrap()
                .abs()
                < 1e-9
        );
    }

    #[test]
    fn dense_output_tracks_circular_motion_in_flat_space() {
        // x = cos t, y = sin t is not a geodesic; use a straight line in
        // spherical coordinates, whose (r, β) evolve non-linearly.
        let flat = MinkowskiSpherical::default();
        let y0 = [0.0, 2.0, FRAC_PI_2, 0.0];
        let v0 = [1.0, 0.0, 0.0, 0.5];
        let traj = integrate(
            &flat,
            GeodesicState::new(0.0, y0, v0),
            6.0,
            &SolverOptions::default(),
        )
        .unwrap();
        for k in 0..=60 {
            let t = 0.1 * k as f64;
            let st = traj.state_at(t).unwrap();
            let r = (4.0 + t * t).sqrt();
            let b = t.atan2(2.0);
            assert!((st.y[1] - r).abs() < 1e-9, "t={t}");
            assert!((st.y[3] - b).abs() < 1e-9, "t={t}");
        }
        let drift = traj
            .conserved
            .iter()
            .map(|c| (c.l - traj.conserved[0].l).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-9, "{drift:e}");
    }

    #[test]
    fn ingoing_radial_geodesic_stops_at_horizon() {
        let y0 = [0.0, 4.0, 1.0, 0.0];
        let v0 = [-1.0 / 0.5, -1.0, 0.0, 0.0];
        let opts = SolverOptions::default();
        let traj = integrate(&sch(), GeodesicState::new(0.0, y0, v0), 10.0, &opts).unwrap();
        let ev = traj.termination().expect("terminal event");
        assert_eq!(ev.kind, EventKind::Horizon);
        // r = 4 − t reaches 2(1 + 1e-8) at t ≈ 2.
        assert!((ev.t - (2.0 - 2e-8)).abs() < 1e-6, "{}", ev.t);
        let bound = 2.0 * (1.0 + opts.guards.eps_horizon);
        let n = traj.states.len();
        assert!(traj.states[..n - 1].iter().all(|s| s.y[1] > bound));
    }

    #[test]
    fn rejects_bad_inputs() {
        let st = GeodesicState::new(0.0, [0.0, 1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 0.0]);
        assert!(integrate(&sch(), st, 1.0, &SolverOptions::default()).is_err());
        let st = GeodesicState::new(0.0, [0.0, 5.0, 1.0, 0.0], [1.0, 0.0, 0.0, 0.0]);
        assert!(integrate(&sch(), st, 0.0, &SolverOptions::default()).is_err());
    }

    #[test]
    fn max_steps_exhaustion_is_a_step_failure() {
        let st = GeodesicState::new(0.0, [0.0, 10.0, 1.0, 0.0], [1.25, 1.0, 0.0, 0.0]);
        let opts = SolverOptions {
            max_steps: 3,
            ..SolverOptions::default()
        };
        let traj = integrate(&sch(), st, 100.0, &opts).unwrap();
        assert_eq!(traj.termination().unwrap().kind, EventKind::StepFailure);
    }

    #[test]
    fn lift_adds_lambda_times_tangent() {
        use std::collections::HashMap;
        let c = InitialCurve::from_exprs(
            ["theta", "10", "0.1*theta", "0"],
            ["1", "0", "0.1", "0"],
            &HashMap::new(),
            (0.0, 1.0),
            false,
        )
        .unwrap();
        let a = GeodesicState::from_curve(&c, 0.5, -1.0, VelocityLift::AsGiven);
        assert_eq!(a.v, [1.0, 0.0, 0.1, 0.0]);
        let b = GeodesicState::from_curve(&c, 0.5, -1.0, VelocityLift::AlongCharacteristic);
        assert_eq!(b.v, [0.0, 0.0, 0.0, 0.0]);
    }
}
