//! Elliptic solutions of `(du/dα)² = 2m(u − u₁)(u − u₂)(u − u₃)` on the two
//! bounded branches that start from rest in `u`.
//!
//! With roots `R₁ > R₂ > R₃`:
//! * inner branch, `u` starts at `R₁` and grows: `u = R₂ + (R₁ − R₂) sec²(ξ/2)`,
//!   `α = α₀ + 2c F(ξ/2, k)`, `c = [2m(R₁ − R₃)]^{-1/2}`;
//! * outer branch, `u` starts at `R₂` and falls: `u = R₃ + ½(R₂ − R₃)(1 − cos ξ)`,
//!   `α = C₀ + 2c F(ξ/2, k)`, `C₀ = α₀ − 2c F(π/2, k)`.
//!
//! Both use `k² = (R₂ − R₃)/(R₁ − R₃)`. The direction of motion in `α`
//! (the sign of `α_t`) selects the half of the `ξ` range that is traversed.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::oracles::elliptic::{amplitude, complete_k, elliptic_f, elliptic_f_derivative};
use crate::reduction::{CaseLabel, CubicProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchShape {
    Secant,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticBranch {
    pub shape: BranchShape,
    pub m: f64,
    /// Roots, largest first.
    pub roots: [f64; 3],
    pub alpha0: f64,
    /// Sign of `α_t`.
    pub sigma: f64,
    k: f64,
    c: f64,
    big_k: f64,
}

impl EllipticBranch {
    pub fn new(
        shape: BranchShape,
        m: f64,
        roots: [f64; 3],
        alpha0: f64,
        sigma: f64,
    ) -> Result<Self> {
        let [r1, r2, r3] = roots;
        if !(r1 > r2 && r2 > r3) {
            return Err(Error::InvalidParameter(format!(
                "branch roots must be distinct and decreasing, got {roots:?}"
            )));
        }
        if sigma != 1.0 && sigma != -1.0 {
            return Err(Error::InvalidParameter(format!(
                "sign must be ±1, got {sigma}"
            )));
        }
        let k = ((r2 - r3) / (r1 - r3)).sqrt();
        Ok(Self {
            shape,
            m,
            roots,
            alpha0,
            sigma,
            k,
            c: 1.0 / (2.0 * m * (r1 - r3)).sqrt(),
            big_k: complete_k(k)?,
        })
    }

    pub fn from_profile(profile: &CubicProfile, alpha0: f64, sigma: f64) -> Result<Self> {
        let shape = match profile.case_label {
            CaseLabel::InnerBranch => BranchShape::Secant,
            CaseLabel::OuterBranch => BranchShape::Cosine,
            other => {
                return Err(Error::BranchRange(format!(
                    "profile labelled {other} has no elliptic branch"
                )))
            }
        };
        let roots: [f64; 3] = profile
            .roots
            .as_slice()
            .try_into()
            .map_err(|_| Error::BranchRange("profile needs three real roots".into()))?;
        Self::new(shape, profile.m, roots, alpha0, sigma)
    }

    pub fn k_squared(&self) -> f64 {
        self.k * self.k
    }

    pub fn modulus(&self) -> f64 {
        self.k
    }

    /// `[2m(R₁ − R₃)]^{-1/2}`.
    pub fn scale(&self) -> f64 {
        self.c
    }

    /// Starting value of `u`.
    pub fn u_start(&self) -> f64 {
        match self.shape {
            BranchShape::Secant => self.roots[0],
            BranchShape::Cosine => self.roots[1],
        }
    }

    /// Integration constant added to `2c F(ξ/2, k)`.
    pub fn offset(&self) -> f64 {
        match self.shape {
            BranchShape::Secant => self.alpha0,
            BranchShape::Cosine => self.alpha0 - 2.0 * self.c * self.big_k,
        }
    }

    /// Range of `u` reachable on this branch (the secant branch is cut at
    /// the horizon `u = 1/(2m)`).
    pub fn u_range(&self) -> (f64, f64) {
        match self.shape {
            BranchShape::Secant => (self.roots[0], 1.0 / (2.0 * self.m)),
            BranchShape::Cosine => (self.roots[2].max(0.0), self.roots[1]),
        }
    }

    fn check_u(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.u_range();
        let slack = 1e-12 * hi.abs();
        let ok = match self.shape {
            BranchShape::Secant => u >= lo - slack && u < hi,
            BranchShape::Cosine => u > lo && u <= hi + slack,
        };
        if !ok {
            return Err(Error::BranchRange(format!(
                "u = {u} outside the {:?} branch range ({lo}, {hi})",
                self.shape
            )));
        }
        Ok(())
    }

    /// Half angle `ξ/2` reached when the motion arrives at `u`.
    pub fn half_xi_of_u(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        let [r1, r2, r3] = self.roots;
        Ok(match self.shape {
            BranchShape::Secant => self.sigma * (u - r1).max(0.0).sqrt().atan2((r1 - r2).sqrt()),
            BranchShape::Cosine => {
                let psi = (u - r3).max(0.0).sqrt().atan2((r2 - u).max(0.0).sqrt());
                if self.sigma > 0.0 {
                    std::f64::consts::PI - psi
                } else {
                    psi
                }
            }
        })
    }

    pub fn u_of_half_xi(&self, half_xi: f64) -> f64 {
        let [r1, r2, r3] = self.roots;
        match self.shape {
            BranchShape::Secant => r2 + (r1 - r2) / half_xi.cos().powi(2),
            BranchShape::Cosine => r3 + (r2 - r3) * half_xi.sin().powi(2),
        }
    }

    /// `du/d(ξ/2)`.
    pub fn du_dhalf(&self, half_xi: f64) -> f64 {
        let [r1, r2, r3] = self.roots;
        let (s, c) = half_xi.sin_cos();
        match self.shape {
            BranchShape::Secant => 2.0 * (r1 - r2) * s / (c * c * c),
            BranchShape::Cosine => 2.0 * (r2 - r3) * s * c,
        }
    }

    /// `ξ/2` at the start of the motion.
    pub fn half_xi_start(&self) -> f64 {
        match self.shape {
            BranchShape::Secant => 0.0,
            BranchShape::Cosine => FRAC_PI_2,
        }
    }

    /// End of the traversed `ξ/2` range: where the secant branch reaches
    /// `r = 2m(1 + 10⁻⁸)` (the stand-off used by numerical integration), or
    /// where the cosine branch reaches `u = max(u₃, 0)`.
    pub fn half_xi_limit(&self) -> f64 {
        let [r1, r2, r3] = self.roots;
        match self.shape {
            BranchShape::Secant => {
                let uh = 1.0 / (2.0 * self.m * (1.0 + 1e-8));
                self.sigma * (uh - r1).max(0.0).sqrt().atan2((r1 - r2).sqrt())
            }
            BranchShape::Cosine => {
                let z = (-r3).max(0.0).sqrt().atan2(r2.max(0.0).sqrt());
                if self.sigma > 0.0 {
                    std::f64::consts::PI - z
                } else {
                    z
                }
            }
        }
    }

    pub fn alpha_of_half_xi(&self, half_xi: f64) -> Result<f64> {
        Ok(2.0 * self.c * elliptic_f(half_xi, self.k)? + self.offset())
    }

    /// `dα/d(ξ/2) = 2c/√(1 − k² sin²(ξ/2))`.
    pub fn dalpha_dhalf(&self, half_xi: f64) -> f64 {
        2.0 * self.c * elliptic_f_derivative(half_xi, self.k)
    }

    /// `α` on the branch where it passes through `u`.
    pub fn alpha_of_u(&self, u: f64) -> Result<f64> {
        let h = self.half_xi_of_u(u)?;
        Ok(2.0 * self.c * elliptic_f(h, self.k)? + self.offset())
    }

    /// `α − (2c F(ξ(u)/2, k) + C₀)`.
    pub fn alpha_residual(&self, u: f64, alpha: f64) -> Result<f64> {
        Ok(alpha - self.alpha_of_u(u)?)
    }

    pub fn half_xi_of_alpha(&self, alpha: f64) -> Result<f64> {
        let h = amplitude((alpha - self.offset()) / (2.0 * self.c), self.k)?;
        let ok = match self.shape {
            BranchShape::Secant => h.abs() < FRAC_PI_2 && h * self.sigma >= 0.0,
            BranchShape::Cosine => {
                if self.sigma > 0.0 {
                    (FRAC_PI_2..=std::f64::consts::PI).contains(&h)
                } else {
                    (0.0..=FRAC_PI_2).contains(&h)
                }
            }
        };
        if !ok {
            return Err(Error::BranchRange(format!(
                "α = {alpha} lies outside the traversed branch (ξ/2 = {h})"
            )));
        }
        Ok(h)
    }

    /// `u(α)` by inverting the elliptic integral.
    pub fn u_of_alpha(&self, alpha: f64) -> Result<f64> {
        let u = self.u_of_half_xi(self.half_xi_of_alpha(alpha)?);
        if self.shape == BranchShape::Secant && !(u < 1.0 / (2.0 * self.m)) {
            return Err(Error::BranchRange(format!(
                "u(α = {alpha}) = {u} is inside the horizon"
            )));
        }
        Ok(u)
    }

    /// `du/dα` at `α`.
    pub fn du_dalpha(&self, alpha: f64) -> Result<f64> {
        let h = self.half_xi_of_alpha(alpha)?;
        Ok(self.du_dhalf(h) / (2.0 * self.c * elliptic_f_derivative(h, self.k)))
    }
}
