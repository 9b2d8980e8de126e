//! The traveling-wave focusing solution in one dimension and the self-similar
//! scaling frame it anchors.
//!
//! For a hole collapsing in d = 1, the similarity ansatz
//!
//! ```text
//!     V(x,t) = (x²/(−t))·φ(ζ),    ζ = c·t/x = γ·c·t/x with γ = −1,
//! ```
//!
//! closes with the quadratic profile φ(ζ) = −ζ(1+ζ) on −1 ≤ ζ ≤ 0 and φ = 0
//! for ζ ≤ −1. Unwinding the ansatz gives the piecewise-linear wave
//!
//! ```text
//!     V(x,t) = c·max(0, |x| + c·t),
//! ```
//!
//! whose interface ρ(t) = c·(−t) hits the origin at t = 0 with constant speed
//! c. Inside its support the wave satisfies the pressure equation exactly for
//! every m > 1: ∂xxV = 0 kills the nonlinear term and ∂tV = c² = (∂xV)².
//! The similarity exponent is α* = 1 (interface ∝ (−t)^{α*}).

use crate::error::{Error, Result};
use crate::gas::{GasParams, PressurePartials};

/// Interface exponent: ρ(t) ∝ (−t)^{α*}.
pub const ALPHA_STAR: f64 = 1.0;

/// Sign convention in the similarity variable ζ = γ·c·(−t)/x.
pub const GAMMA: f64 = -1.0;

/// Wave pressure c·max(0, |x| + c·t). Defined for all (x, t); the focusing
/// regime of interest is t ≤ 0 with c > 0.
pub fn pressure(x: f64, t: f64, c: f64) -> f64 {
    c * (x.abs() + c * t).max(0.0)
}

/// Similarity profile φ(ζ) = −ζ(1+ζ) for −1 ≤ ζ ≤ 0, and 0 for ζ ≤ −1.
/// ζ > 0 lies outside the pre-focus contract and continues the parabola.
pub fn profile(zeta: f64) -> f64 {
    if zeta <= -1.0 {
        0.0
    } else {
        -zeta * (1.0 + zeta)
    }
}

/// Interface position ρ(t) = c·(−t) for t ≤ 0.
pub fn interface(t: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::WaveSpeedOutOfRange(c));
    }
    if t > 0.0 {
        return Err(Error::AfterFocus(t));
    }
    Ok(c * -t)
}

/// A traveling wave with validated parameters, exposing closed-form partial
/// derivatives for residual checks.
#[derive(Debug, Clone, PartialEq)]
pub struct GraveleauWave {
    pub params: GasParams,
    pub c: f64,
}

impl GraveleauWave {
    pub fn new(m: f64, c: f64) -> Result<Self> {
        let params = GasParams::line(m)?;
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::WaveSpeedOutOfRange(c));
        }
        Ok(GraveleauWave { params, c })
    }

    pub fn pressure(&self, x: f64, t: f64) -> f64 {
        pressure(x, t, self.c)
    }

    pub fn interface(&self, t: f64) -> Result<f64> {
        interface(t, self.c)
    }

    /// Partials at (x, t): inside the support (|x| + ct > 0, x ≠ 0) the field
    /// is the plane c(|x| + ct); outside it is identically zero. On the ridge
    /// x = 0 and on the interface the derivatives are one-sided; this returns
    /// the interior limit from x > 0 on the ridge and zeros on the interface.
    pub fn partials(&self, x: f64, t: f64) -> PressurePartials {
        let c = self.c;
        if x.abs() + c * t > 0.0 {
            PressurePartials {
                v: c * (x.abs() + c * t),
                v_x: c * if x < 0.0 { -1.0 } else { 1.0 },
                v_xx: 0.0,
                v_t: c * c,
            }
        } else {
            PressurePartials { v: 0.0, v_x: 0.0, v_xx: 0.0, v_t: 0.0 }
        }
    }
}
