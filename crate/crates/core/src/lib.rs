//! Light-like extremal surfaces in curved spacetimes.
//!
//! A light-like surface is evolved from an initial strip `(φ(ϑ), ψ(ϑ))` by
//! straightening the Burgers characteristics `θ = ϑ + Λ(ϑ)t`, integrating one
//! geodesic per characteristic, and reassembling `x(t, θ)` on a mesh. The
//! Schwarzschild reduction (first integrals and the `u = 1/r` cubic) and
//! closed-form reference solutions are included for checking.

pub mod characteristics;
pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod geodesic;
pub mod initial_data;
pub mod oracles;
pub mod quad;
pub mod reduction;
pub mod roots;
pub mod spacetime;
pub mod spline;
pub mod surface;

pub use characteristics::CharacteristicMap;
pub use error::{Error, Result};
pub use geodesic::{
    integrate, EventKind, GeodesicState, GeodesicTrajectory, SolverOptions, VelocityLift,
};
pub use initial_data::{validate, ConservedSet, CurveComponent, InitialCurve, Tolerances};
pub use oracles::{OracleKind, OracleSolution};
pub use reduction::{CaseLabel, CubicProfile};
pub use spacetime::{
    InducedMetric, MinkowskiSpherical, Schwarzschild, SchwarzschildParams, Spacetime,
};
pub use surface::{build_surface, delta_monitor, integrate_characteristics, SurfaceMesh};
