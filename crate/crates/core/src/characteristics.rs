//! The Burgers field `λ(t, θ)` solved along straight characteristics
//! `θ = ϑ + Λ(ϑ)·t`, and the change of variables `(t, θ) → (t, ϑ)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::initial_data::{central_difference4, lambda0, uniform_grid, InitialCurve, ScalarFn};
use crate::roots::newton_bisect;
use crate::spacetime::Spacetime;

#[derive(Clone)]
pub struct CharacteristicMap {
    lambda: ScalarFn,
    lambda_prime: ScalarFn,
    domain: (f64, f64),
    periodic: bool,
    t_max: Option<f64>,
}

impl fmt::Debug for CharacteristicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharacteristicMap")
            .field("domain", &self.domain)
            .field("periodic", &self.periodic)
            .field("t_max", &self.t_max)
            .finish()
    }
}

/// Tolerance on `|ϑ + Λ(ϑ)t − θ|`, relative to `1 + |θ|`.
const INVERT_TOL: f64 = 1e-15;

impl CharacteristicMap {
    pub fn new(
        lambda: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lambda_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
        periodic: bool,
    ) -> Self {
        Self {
            lambda: Arc::new(lambda),
            lambda_prime: Arc::new(lambda_prime),
            domain,
            periodic,
            t_max: None,
        }
    }

    /// Map whose Λ comes from the initial strip; Λ' by fourth-order central
    /// differences of Λ.
    pub fn from_curve<S>(curve: Arc<InitialCurve>, spacetime: Arc<S>, eps_g11: f64) -> Result<Self>
    where
        S: Spacetime + ?Sized + 'static,
    {
        // Fail early on a degenerate strip rather than inside a closure.
        for t in curve.grid(33) {
            lambda0(curve.as_ref(), spacetime.as_ref(), t, eps_g11)?;
        }
        let domain = curve.domain;
        let periodic = curve.periodic;
        let lam: ScalarFn = {
            let curve = curve.clone();
            let spacetime = spacetime.clone();
            Arc::new(move |t| {
                lambda0(curve.as_ref(), spacetime.as_ref(), t, eps_g11).unwrap_or(f64::NAN)
            })
        };
        let lam_prime: ScalarFn = {
            let lam = lam.clone();
            Arc::new(move |t| central_difference4(lam.as_ref(), t))
        };
        Ok(Self {
            lambda: lam,
            lambda_prime: lam_prime,
            domain,
            periodic,
            t_max: None,
        })
    }

    /// Samples Λ' on `samples` points; if Λ decreases anywhere, the map is
    /// only certified for `t < 1/max(−Λ')`.
    pub fn certify(mut self, samples: usize, eps_mono: f64) -> Self {
        let worst = uniform_grid(self.domain, samples)
            .into_iter()
            .map(|t| (self.lambda_prime)(t))
            .fold(f64::INFINITY, f64::min);
        self.t_max = (worst < -eps_mono).then(|| -1.0 / worst);
        self
    }

    pub fn t_max(&self) -> Option<f64> {
        self.t_max
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    fn wrap(&self, vartheta: f64) -> f64 {
        if !self.periodic {
            return vartheta;
        }
        let (a, b) = self.domain;
        let p = b - a;
        a + (vartheta - a).rem_euclid(p)
    }

    pub fn lambda(&self, vartheta: f64) -> f64 {
        (self.lambda)(self.wrap(vartheta))
    }

    pub fn lambda_prime(&self, vartheta: f64) -> f64 {
        (self.lambda_prime)(self.wrap(vartheta))
    }

    /// `θ = ϑ + Λ(ϑ)·t`.
    pub fn forward(&self, vartheta: f64, t: f64) -> f64 {
        vartheta + self.lambda(vartheta) * t
    }

    /// The unique ϑ with `ϑ + Λ(ϑ)t = θ`; periodic maps return ϑ wrapped
    /// into the domain.
    pub fn invert(&self, t: f64, theta: f64) -> Result<f64> {
        if let Some(tm) = self.t_max {
            if t >= tm {
                return Err(Error::MapBreakdown {
                    t,
                    vartheta: f64::NAN,
                    denominator: 1.0 - t / tm,
                });
            }
        }
        if t == 0.0 {
            return Ok(self.wrap(theta));
        }
        let h = |v: f64| self.forward(v, t) - theta;
        let (lo, hi) = if self.periodic {
            let p = self.domain.1 - self.domain.0;
            let start = theta - self.lambda(theta) * t;
            let mut lo = start;
            let mut hi = start;
            let mut guard = 0;
            while h(lo) > 0.0 && guard < 10_000 {
                lo -= p;
                guard += 1;
            }
            while h(hi) < 0.0 && guard < 20_000 {
                hi += p;
                guard += 1;
            }
            (lo, hi)
        } else {
            let (a, b) = self.domain;
            let slack = INVERT_TOL * (1.0 + theta.abs());
            let (ha, hb) = (h(a), h(b));
            if ha > slack || hb < -slack {
                return Err(Error::BracketFailure { t, theta });
            }
            if ha >= 0.0 {
                return Ok(a);
            }
            if hb <= 0.0 {
                return Ok(b);
            }
            (a, b)
        };

        let mut breakdown = None;
        let root = newton_bisect(
            |v| {
                let d = 1.0 + self.lambda_prime(v) * t;
                if d <= 0.0 && breakdown.is_none() {
                    breakdown = Some((v, d));
                }
                (h(v), d)
            },
            lo,
            hi,
            INVERT_TOL,
            200,
        );
        if let Some((v, d)) = breakdown {
            return Err(Error::MapBreakdown {
                t,
                vartheta: v,
                denominator: d,
            });
        }
        Ok(self.wrap(root?))
    }

    /// `∂ϑ/∂θ = 1/(1 + Λ'(ϑ)t)`.
    pub fn jacobian(&self, t: f64, vartheta: f64) -> Result<f64> {
        let denominator = 1.0 + self.lambda_prime(vartheta) * t;
        if !(denominator > 0.0) {
            return Err(Error::MapBreakdown {
                t,
                vartheta,
                denominator,
            });
        }
        Ok(1.0 / denominator)
    }

    /// `λ(t, θ) = Λ(ϑ(t, θ))`.
    pub fn lambda_field(&self, t: f64, theta: f64) -> Result<f64> {
        Ok(self.lambda(self.invert(t, theta)?))
    }

    /// Largest centred-difference residual of `λ_t + λλ_θ` with step `h`
    /// over the interior points of `ts × thetas`.
    pub fn burgers_residual(&self, ts: &[f64], thetas: &[f64], h: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for &t in ts {
            for &th in thetas {
                let lt =
                    (self.lambda_field(t + h, th)? - self.lambda_field(t - h, th)?) / (2.0 * h);
                let lth =
                    (self.lambda_field(t, th + h)? - self.lambda_field(t, th - h)?) / (2.0 * h);
                let l = self.lambda_field(t, th)?;
                worst = worst.max((lt + l * lth).abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear() -> CharacteristicMap {
        CharacteristicMap::new(|v| v, |_| 1.0, (-10.0, 10.0), false)
    }

    #[test]
    fn forward_examples() {
        let m = CharacteristicMap::new(|_| -1.0, |_| 0.0, (-5.0, 5.0), false);
        assert_eq!(m.forward(2.0, 3.0), -1.0);
        assert_eq!(m.forward(2.0, 0.0), 2.0);
        assert_eq!(linear().forward(0.5, 1.0), 1.0);
    }

    #[test]
    fn invert_examples() {
        let c = CharacteristicMap::new(|_| 0.7, |_| 0.0, (-10.0, 10.0), false);
        assert!((c.invert(2.0, 1.0).unwrap() - (1.0 - 1.4)).abs() < 1e-15);
        assert!((linear().invert(1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jacobian_examples() {
        let c = CharacteristicMap::new(|_| 0.7, |_| 0.0, (-10.0, 10.0), false);
        assert_eq!(c.jacobian(123.0, 0.3).unwrap(), 1.0);
        assert_eq!(linear().jacobian(1.0, 0.3).unwrap(), 0.5);
    }

    #[test]
    fn decreasing_lambda_breaks_down_at_crossing() {
        let m = CharacteristicMap::new(|v| -v, |_| -1.0, (-2.0, 2.0), false);
        assert!(m.jacobian(0.999, 0.1).unwrap() > 900.0);
        assert!(matches!(
            m.jacobian(1.0, 0.1),
            Err(Error::MapBreakdown { .. })
        ));
        let m = m.certify(11, 1e-10);
        assert!((m.t_max().unwrap() - 1.0).abs() < 1e-12);
        assert!(m.invert(0.5, 0.3).is_ok());
        assert!(matches!(
            m.invert(1.5, 0.3),
            Err(Error::MapBreakdown { .. })
        ));
    }

    #[test]
    fn outside_image_is_a_bracket_failure() {
        let m = CharacteristicMap::new(|_| 1.0, |_| 0.0, (0.0, 1.0), false);
        assert!(matches!(
            m.invert(2.0, 0.5),
            Err(Error::BracketFailure { .. })
        ));
        assert!((m.invert(2.0, 2.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn periodic_wraps() {
        let tau = std::f64::consts::TAU;
        let m =
            CharacteristicMap::new(|v| 0.3 + 0.1 * v.sin(), |v| 0.1 * v.cos(), (0.0, tau), true);
        for &(v, t) in &[(0.2, 3.0), (6.0, 0.5), (1.0, 8.0)] {
            let th = m.forward(v, t);
            let back = m.invert(t, th).unwrap();
            assert!((back - v).abs() < 1e-12, "{v} {t} -> {back}");
        }
        // θ beyond the period.
        let v = m.invert(8.0, 20.0).unwrap();
        assert!((0.0..tau).contains(&v));
        let th = m.forward(v, 8.0);
        let diff = (th - 20.0) / tau;
        assert!((diff - diff.round()).abs() < 1e-12);
    }

    #[test]
    fn rarefaction_field() {
        let m = linear();
        for &(t, th) in &[(0.5, 1.0), (2.0, -3.0), (1.0, 0.0)] {
            assert!((m.lambda_field(t, th).unwrap() - th / (1.0 + t)).abs() < 1e-14);
        }
        let c = CharacteristicMap::new(|_| -0.4, |_| 0.0, (-10.0, 10.0), false);
        assert_eq!(c.lambda_field(3.0, 0.2).unwrap(), -0.4);
    }

    #[test]
    fn burgers_residual_is_second_order_for_arctan() {
        let m = CharacteristicMap::new(f64::atan, |v| 1.0 / (1.0 + v * v), (-50.0, 50.0), false);
        let ts = uniform_grid((0.2, 2.0), 20);
        let ths = uniform_grid((-3.0, 3.0), 20);
        let e1 = m.burgers_residual(&ts, &ths, 0.02).unwrap();
        let e2 = m.burgers_residual(&ts, &ths, 0.01).unwrap();
        let order = (e1 / e2).log2();
        assert!(order > 1.9, "order {order} ({e1:e} → {e2:e})");
    }
}
