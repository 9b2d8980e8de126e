//! The explicit point-mass ("instantaneous source") solution of the porous
//! medium equation in one dimension, and its focusing configuration.
//!
//! A mass M released at position ξ at time τ < 0 has pressure
//!
//! ```text
//!     V(x,t) = β·R(s)²/(2s) · {1 − (x−ξ)²/R(s)²}₊ ,   s = t − τ,
//!     R(s)   = √(A/B)·s^β ,      β = 1/(m+1),  B = (m−1)/(2m(m+1)),
//! ```
//!
//! a downward parabola supported exactly on (ξ−R(s), ξ+R(s)). Amplitude A and
//! mass are tied by
//!
//! ```text
//!     M = A^{(m+1)/(2(m−1))} · B^{−1/2} · ∫₀^{π/2} (cos θ)^{(m+1)/(m−1)} dθ .
//! ```
//!
//! The hole-filling configuration pairs two such sources at ±ξ (equivalently,
//! one source on the half line with a zero-flux wall at the origin) and tunes
//! A so the inner free boundary reaches the origin exactly at t = 0:
//! ξ = R(−τ), i.e. A = B·ξ²/(−τ)^{2β}. With that choice the pressure takes the
//! pure focusing form implemented by [`focusing_pair_pressure`].

use crate::error::{Error, Result};
use crate::gas::{GasParams, PressurePartials};
use crate::quad;

/// Absolute tolerance for the mass quadrature.
const MASS_QUAD_TOL: f64 = 1e-13;

/// A point-mass pressure field: parameters, release point (ξ, τ), amplitude A,
/// and the total mass consistent with A.
#[derive(Debug, Clone, PartialEq)]
pub struct BarenblattField {
    pub params: GasParams,
    /// Source position; ξ > 0.
    pub xi: f64,
    /// Release time; τ < 0 so the pre-focus era is (τ, 0).
    pub tau: f64,
    /// Profile amplitude A > 0.
    pub amplitude: f64,
    /// Mass via the quadrature relation; fixed at construction.
    pub mass: f64,
}

impl BarenblattField {
    pub fn new(m: f64, xi: f64, tau: f64, amplitude: f64) -> Result<Self> {
        let params = GasParams::line(m)?;
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(Error::CenterOutOfRange(xi));
        }
        if !(tau < 0.0) || !tau.is_finite() {
            return Err(Error::ReleaseTimeOutOfRange(tau));
        }
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(Error::AmplitudeOutOfRange(amplitude));
        }
        let mass = mass(amplitude, m)?;
        Ok(BarenblattField { params, xi, tau, amplitude, mass })
    }

    /// The field whose inner interface reaches r = 0 exactly at t = 0.
    pub fn focusing(m: f64, xi: f64, tau: f64) -> Result<Self> {
        let a = focusing_amplitude(xi, tau, m)?;
        Self::new(m, xi, tau, a)
    }

    /// Free-boundary radius R(t−τ) = √(A/B)·(t−τ)^β.
    pub fn radius(&self, t: f64) -> Result<f64> {
        let s = self.elapsed(t)?;
        Ok((self.amplitude / self.params.big_b).sqrt() * s.powf(self.params.beta))
    }

    /// Pressure at (x, t); zero outside the support interval.
    pub fn pressure(&self, x: f64, t: f64) -> Result<f64> {
        let s = self.elapsed(t)?;
        let r2 = self.radius_sq(s);
        let y = x - self.xi;
        let bracket = 1.0 - y * y / r2;
        Ok(self.params.beta * r2 / (2.0 * s) * bracket.max(0.0))
    }

    /// The open interval (ξ−R, ξ+R) where the pressure is strictly positive.
    pub fn support_interval(&self, t: f64) -> Result<(f64, f64)> {
        let r = self.radius(t)?;
        Ok((self.xi - r, self.xi + r))
    }

    /// Closed-form partial derivatives at (x, t). Inside the support these are
    /// the derivatives of the parabola; outside, the field is identically zero.
    /// (On the interface itself the one-sided derivatives differ; this returns
    /// the interior limit when the point lies exactly on the edge.)
    pub fn partials(&self, x: f64, t: f64) -> Result<PressurePartials> {
        let s = self.elapsed(t)?;
        let r2 = self.radius_sq(s);
        let y = x - self.xi;
        if y * y > r2 {
            return Ok(PressurePartials { v: 0.0, v_x: 0.0, v_xx: 0.0, v_t: 0.0 });
        }
        let beta = self.params.beta;
        let a_over_b = self.amplitude / self.params.big_b;
        Ok(PressurePartials {
            v: beta / (2.0 * s) * (r2 - y * y),
            v_x: -beta * y / s,
            v_xx: -beta / s,
            v_t: 0.5
                * beta
                * ((2.0 * beta - 1.0) * a_over_b * s.powf(2.0 * beta - 2.0) + y * y / (s * s)),
        })
    }

    fn elapsed(&self, t: f64) -> Result<f64> {
        let s = t - self.tau;
        if !(s > 0.0) {
            return Err(Error::BeforeRelease { t, tau: self.tau });
        }
        Ok(s)
    }

    fn radius_sq(&self, s: f64) -> f64 {
        self.amplitude / self.params.big_b * s.powf(2.0 * self.params.beta)
    }
}

/// Total mass carried by a field of amplitude A:
/// M = A^{(m+1)/(2(m−1))}·B^{−1/2}·∫₀^{π/2}(cos θ)^{(m+1)/(m−1)} dθ.
pub fn mass(amplitude: f64, m: f64) -> Result<f64> {
    let params = GasParams::line(m)?;
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::AmplitudeOutOfRange(amplitude));
    }
    let q = (m + 1.0) / (m - 1.0);
    let integral = quad::integrate(|theta| theta.cos().powf(q), 0.0, std::f64::consts::FRAC_PI_2, MASS_QUAD_TOL)?;
    Ok(amplitude.powf(0.5 * q) * params.big_b.powf(-0.5) * integral)
}

/// Amplitude that makes the inner interface reach the origin at t = 0:
/// A = B·ξ²/(−τ)^{2β} (equivalently ξ = R(−τ)).
pub fn focusing_amplitude(xi: f64, tau: f64, m: f64) -> Result<f64> {
    let params = GasParams::line(m)?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::CenterOutOfRange(xi));
    }
    if !(tau < 0.0) || !tau.is_finite() {
        return Err(Error::ReleaseTimeOutOfRange(tau));
    }
    Ok(params.big_b * xi * xi / (-tau).powf(2.0 * params.beta))
}

/// The focusing pair pressure in its scale-explicit form,
///
/// ```text
///     V(x,t) = (ξ²β/(2(−τ)))·(1−t/τ)^{2β−1}·{1 − (1−x/ξ)²/(1−t/τ)^{2β}}₊ ,
/// ```
///
/// valid for τ < t ≤ 0. Identical (to rounding) to a [`BarenblattField`] with
/// the focusing amplitude; vanishes at x = 0 for every t in the window.
pub fn focusing_pair_pressure(x: f64, t: f64, xi: f64, tau: f64, m: f64) -> Result<f64> {
    let params = GasParams::line(m)?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::CenterOutOfRange(xi));
    }
    if !(tau < 0.0) || !tau.is_finite() {
        return Err(Error::ReleaseTimeOutOfRange(tau));
    }
    if !(t > tau && t <= 0.0) {
        return Err(Error::OutsidePreFocusWindow { t, tau });
    }
    let beta = params.beta;
    let shape = 1.0 - t / tau; // (t−τ)/(−τ) ∈ (0, 1]
    let prefactor = xi * xi * beta / (2.0 * -tau) * shape.powf(2.0 * beta - 1.0);
    let w = 1.0 - x / xi;
    let bracket = 1.0 - w * w / shape.powf(2.0 * beta);
    Ok(prefactor * bracket.max(0.0))
}
