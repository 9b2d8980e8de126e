//! Numerical laboratory for hole-filling in slow nonlinear diffusion.
//!
//! A gas spreading by the porous medium equation ∂tU = Δ(U^m), m > 1, has
//! sharp interfaces. When the initial gas surrounds an empty hole, the hole
//! fills in finite time; right before the focusing instant the flow forgets
//! its initial data and approaches a self-similar traveling wave whose speed
//! is pinned by the release geometry. This crate provides the three pillars
//! needed to study that collapse quantitatively, plus the fitting layer that
//! connects them:
//!
//! * [`barenblatt`] — the explicit point-mass solution, its focusing
//!   configuration, masses, and closed-form derivatives;
//! * [`graveleau`] — the exact hole-filling traveling wave in one dimension
//!   and its similarity profile;
//! * [`scaling`] — dimensionless collapse variables and the focusing speed
//!   c* = p·β they predict;
//! * [`solver`] — a conservative explicit finite-volume march for the density
//!   equation with interface tracking and focus detection;
//! * [`asymptotics`] — least-squares extraction of the focusing speed from
//!   simulated traces and remainder diagnostics for the near-focus expansion.
//!
//! Pressure V = (m/(m−1))·U^{m−1} is the natural variable for everything
//! interface-related; conversions and the pressure-equation residual live in
//! [`gas`].

pub mod asymptotics;
pub mod barenblatt;
pub mod error;
pub mod gas;
pub mod graveleau;
pub mod quad;
pub mod scaling;
pub mod solver;
pub mod trace;

pub use error::{Error, Result};
pub use gas::GasParams;
