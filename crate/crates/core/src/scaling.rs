//! Dimensionless variables for the hole-filling window and the small-Π
//! expansion that exposes the focusing constant.
//!
//! With release point (ξ, τ) the natural coordinates of the pre-focus window
//! are Π₁ = t/τ ∈ (0,1) and Π₂ = x/ξ ∈ (0,1); their ratio Π* = Π₁/Π₂ is scale
//! free. The pair pressure collapses onto
//!
//! ```text
//!     Φ(Π₁, Π₂) = (−τ)·V / (β·ξ²)
//!               = ½·(1−Π₁)^{2β−1}·{1 − (1−Π₂)²/(1−Π₁)^{2β}}₊ ,
//! ```
//!
//! and expanding about the focal point Π₁, Π₂ → 0 at fixed Π* gives
//!
//! ```text
//!     Φ = Π₂·(1 − β·Π*) + O(Π²) ,
//! ```
//!
//! i.e. near focus the pressure is asymptotically the traveling wave with
//! speed c* = p·β, where p = ξ/(−τ) and β = 1/(m+1): along a ray t = η·x the
//! leading pressure is c*·(x + c*·t) to first order.

use crate::error::{Error, Result};
use crate::gas::GasParams;

/// The similarity speed and its scale factor: p = ξ/(−τ), c* = p·β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CStar {
    pub p: f64,
    pub c_star: f64,
}

/// Focusing speed of the symmetric pair configuration: c* = (ξ/(−τ))·β.
pub fn c_star_symmetric(xi: f64, tau: f64, m: f64) -> Result<CStar> {
    let params = GasParams::line(m)?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::CenterOutOfRange(xi));
    }
    if !(tau < 0.0) || !tau.is_finite() {
        return Err(Error::ReleaseTimeOutOfRange(tau));
    }
    let p = xi / -tau;
    Ok(CStar { p, c_star: p * params.beta })
}

/// The collapsed pair pressure Φ(Π₁, Π₂). Requires Π₁ ∈ [0, 1), Π₂ ∈ (0, 1].
pub fn dimensionless_phi(pi1: f64, pi2: f64, m: f64) -> Result<f64> {
    let params = GasParams::line(m)?;
    if !(pi1 >= 0.0 && pi1 < 1.0) {
        return Err(Error::ScaledCoordinateOutOfRange {
            name: "Pi1",
            value: pi1,
            range: "[0, 1)",
        });
    }
    if !(pi2 > 0.0 && pi2 <= 1.0) {
        return Err(Error::ScaledCoordinateOutOfRange {
            name: "Pi2",
            value: pi2,
            range: "(0, 1]",
        });
    }
    let beta = params.beta;
    let shape = (1.0 - pi1).powf(2.0 * beta);
    let w = 1.0 - pi2;
    let bracket = 1.0 - w * w / shape;
    Ok(0.5 * shape / (1.0 - pi1) * bracket.max(0.0))
}

/// Leading-order collapsed profile along fixed Π* = Π₁/Π₂: Φ/Π₂ → 1 − β·Π*.
pub fn phi_asymptote(pi_star: f64, m: f64) -> Result<f64> {
    let params = GasParams::line(m)?;
    if !pi_star.is_finite() {
        return Err(Error::ScaledCoordinateOutOfRange {
            name: "PiStar",
            value: pi_star,
            range: "finite",
        });
    }
    Ok(1.0 - params.beta * pi_star)
}

/// A fixed (ξ, τ, m) frame for converting dimensional samples into Π space.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessFrame {
    pub params: GasParams,
    pub xi: f64,
    pub tau: f64,
}

impl DimensionlessFrame {
    pub fn new(m: f64, xi: f64, tau: f64) -> Result<Self> {
        let params = GasParams::line(m)?;
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::CenterOutOfRange(xi));
        }
        if !(tau < 0.0) || !tau.is_finite() {
            return Err(Error::ReleaseTimeOutOfRange(tau));
        }
        Ok(DimensionlessFrame { params, xi, tau })
    }

    /// Π₁ = t/τ (equals 1 at release, 0 at focus).
    pub fn pi1(&self, t: f64) -> f64 {
        t / self.tau
    }

    /// Π₂ = x/ξ.
    pub fn pi2(&self, x: f64) -> f64 {
        x / self.xi
    }

    /// Π* = Π₁/Π₂ — also −p·η for the ray slope η = t/x.
    pub fn pi_star(&self, x: f64, t: f64) -> f64 {
        self.pi1(t) / self.pi2(x)
    }

    /// Scale factor p = ξ/(−τ).
    pub fn p(&self) -> f64 {
        self.xi / -self.tau
    }

    /// Focusing speed c* = p·β of this frame.
    pub fn c_star(&self) -> f64 {
        self.p() * self.params.beta
    }

    /// Collapse a dimensional pressure value: Φ = (−τ)·V/(β·ξ²).
    pub fn scaled_pressure(&self, v: f64) -> f64 {
        -self.tau * v / (self.params.beta * self.xi * self.xi)
    }
}
