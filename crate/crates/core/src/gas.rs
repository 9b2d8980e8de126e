//! Material constants and the density ↔ pressure change of variables.
//!
//! The gas density U ≥ 0 obeys the porous medium equation
//!
//! ```text
//!     ∂t U = Δ(U^m),   m > 1  (slow diffusion)
//! ```
//!
//! and the scaled pressure V = (m/(m−1))·U^{m−1} obeys, in one dimension,
//!
//! ```text
//!     ∂t V = (m−1)·V·∂xx V + (∂x V)².
//! ```
//!
//! Two constants derived from m appear throughout the point-mass solution:
//! the radius growth exponent β = 1/(m+1) (the free boundary of a point mass
//! spreads like s^β in elapsed time s) and the parabolic profile constant
//! B = (m−1)/(2m(m+1)). Both are pure functions of m.

use crate::error::{Error, Result};

/// Exponent m, dimension d, and the derived constants β and B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    /// Diffusion exponent; slow-diffusion regime m > 1 only.
    pub m: f64,
    /// Space dimension (radial formulation); closed-form oracles require d = 1.
    pub d: usize,
    /// Interface growth exponent of the point-mass solution: β = 1/(m+1).
    pub beta: f64,
    /// Profile constant B = (m−1)/(2m(m+1)); the point-mass pressure is
    /// the parabola (β/2s)·(R² − y²) with R(s)² = (A/B)·s^{2β}.
    pub big_b: f64,
}

impl GasParams {
    pub fn new(m: f64, d: usize) -> Result<Self> {
        if !(m > 1.0) || !m.is_finite() {
            return Err(Error::ExponentOutOfRange(m));
        }
        if d < 1 {
            return Err(Error::DimensionOutOfRange(d));
        }
        Ok(GasParams {
            m,
            d,
            beta: 1.0 / (m + 1.0),
            big_b: (m - 1.0) / (2.0 * m * (m + 1.0)),
        })
    }

    /// One-dimensional parameters — the setting of every closed-form solution here.
    pub fn line(m: f64) -> Result<Self> {
        Self::new(m, 1)
    }
}

/// V = (m/(m−1))·U^{m−1}; monotone in U with V(0) = 0.
pub fn pressure_from_density(u: f64, m: f64) -> Result<f64> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::ExponentOutOfRange(m));
    }
    if u < 0.0 || !u.is_finite() {
        return Err(Error::NegativeDensity(u));
    }
    Ok(m / (m - 1.0) * u.powf(m - 1.0))
}

/// Inverse of [`pressure_from_density`]: U = ((m−1)·V/m)^{1/(m−1)}.
pub fn density_from_pressure(v: f64, m: f64) -> Result<f64> {
    if !(m > 1.0) || !m.is_finite() {
        return Err(Error::ExponentOutOfRange(m));
    }
    if v < 0.0 || !v.is_finite() {
        return Err(Error::NegativePressure(v));
    }
    Ok(((m - 1.0) * v / m).powf(1.0 / (m - 1.0)))
}

/// Closed-form partial derivatives of a pressure field at one point,
/// for checking the governing equation analytically (no finite differences).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurePartials {
    pub v: f64,
    pub v_x: f64,
    pub v_xx: f64,
    pub v_t: f64,
}

/// Residual of the one-dimensional pressure equation,
/// ∂tV − [(m−1)·V·∂xxV + (∂xV)²]; identically 0 for an exact solution.
pub fn pressure_equation_residual(m: f64, p: &PressurePartials) -> f64 {
    p.v_t - ((m - 1.0) * p.v * p.v_xx + p.v_x * p.v_x)
}
