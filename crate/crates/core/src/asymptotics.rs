//! Extraction of the focusing constant from simulated free-boundary traces,
//! and diagnostics for how fast the near-focus asymptotics take over.
//!
//! Hole-filling interfaces approach the origin like a(t) ≈ ĉ·(−t)^{α*} with
//! α* = 1 in this geometry, so after shifting times to the detected focus the
//! speed ĉ is a one-parameter least-squares fit of a against (−t)^{1/α*}
//! through the origin. The fit runs over a window −lo·|τ| ≤ t ≤ −hi·|τ|:
//! late enough that the self-similar regime has set in, but ending before
//! the last few samples, where the interface position is only resolved to a
//! cell width and the relative error blows up.

use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::scaling::{dimensionless_phi, phi_asymptote};
use crate::trace::{InterfaceSample, InterfaceTrace};

/// Minimum number of usable samples for a speed fit.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Fit window in units of |τ|: samples with t ∈ [−lo_frac·|τ|, −hi_frac·|τ|]
/// (times relative to focus) enter the fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub lo_frac: f64,
    pub hi_frac: f64,
}

impl FitWindow {
    pub fn new(lo_frac: f64, hi_frac: f64) -> Result<Self> {
        if !(hi_frac > 0.0 && hi_frac < lo_frac && lo_frac < 1.0) {
            return Err(Error::WindowOutOfRange { lo: lo_frac, hi: hi_frac });
        }
        Ok(FitWindow { lo_frac, hi_frac })
    }

    /// Time bounds (t_lo, t_hi) of the window for release time τ < 0.
    pub fn bounds(&self, tau: f64) -> (f64, f64) {
        (self.lo_frac * tau, self.hi_frac * tau)
    }
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow { lo_frac: 0.1, hi_frac: 0.005 }
    }
}

/// Result of a focusing-speed fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CStarEstimate {
    pub c_hat: f64,
    /// Standard error of ĉ under the usual independent-residual model.
    pub stderr: f64,
    pub window: FitWindow,
    pub n_samples: usize,
}

/// Shift every sample time by the detected focus time, so the focus sits at
/// t = 0 and the approach happens at negative times.
pub fn normalize_time(trace: &InterfaceTrace) -> Result<InterfaceTrace> {
    let t_star = trace.focus_time.ok_or(Error::NotFocused)?;
    Ok(InterfaceTrace {
        samples: trace
            .samples
            .iter()
            .map(|s| InterfaceSample { t: s.t - t_star, a: s.a, b: s.b })
            .collect(),
        focus_time: Some(0.0),
    })
}

/// Fit a(t) = ĉ·(−t)^{1/α*} through the origin over the window, on a trace
/// whose times are already relative to the focus (see [`normalize_time`]).
pub fn estimate_c_star(
    trace: &InterfaceTrace,
    window: &FitWindow,
    tau: f64,
    alpha_star: f64,
) -> Result<CStarEstimate> {
    FitWindow::new(window.lo_frac, window.hi_frac)?;
    if !(tau < 0.0) || !tau.is_finite() {
        return Err(Error::ReleaseTimeOutOfRange(tau));
    }
    if !(alpha_star > 0.0) || !alpha_star.is_finite() {
        return Err(Error::SimilarityExponentOutOfRange(alpha_star));
    }
    let (t_lo, t_hi) = window.bounds(tau);
    let in_window: Vec<&InterfaceSample> = trace
        .samples
        .iter()
        .filter(|s| s.t >= t_lo && s.t <= t_hi && s.t < 0.0)
        .collect();
    let usable = in_window.iter().filter(|s| s.a > 0.0).count();
    if usable < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples { got: usable, need: MIN_FIT_SAMPLES });
    }
    let inv_alpha = 1.0 / alpha_star;
    let mut sxx = 0.0;
    let mut sxa = 0.0;
    for s in &in_window {
        let x = (-s.t).powf(inv_alpha);
        sxx += x * x;
        sxa += x * s.a;
    }
    let c_hat = sxa / sxx;
    if !(c_hat > 0.0) {
        return Err(Error::NonPositiveSlope(c_hat));
    }
    let mut rss = 0.0;
    for s in &in_window {
        let x = (-s.t).powf(inv_alpha);
        let res = s.a - c_hat * x;
        rss += res * res;
    }
    let n = in_window.len();
    let stderr = if n > 1 { (rss / ((n - 1) as f64 * sxx)).sqrt() } else { 0.0 };
    Ok(CStarEstimate { c_hat, stderr, window: *window, n_samples: n })
}

/// Relative error of a pressure field against the traveling wave of speed c,
/// sampled along rays t = η·x as x shrinks toward the focus.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileErrorTable {
    pub etas: Vec<f64>,
    pub xs: Vec<f64>,
    /// rel_err[i][j] is the error along etas[i] at xs[j].
    pub rel_err: Vec<Vec<f64>>,
}

/// Compare any pressure evaluator V(x, t) with the wave c·(x + c·t) along
/// rays t = η·x, η < 0, at the given positive x values. Each ray must stay
/// strictly inside the wave support: 1 + c·η > 0.
pub fn profile_convergence<F: Fn(f64, f64) -> f64>(
    evaluator: F,
    c: f64,
    etas: &[f64],
    xs: &[f64],
) -> Result<ProfileErrorTable> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::WaveSpeedOutOfRange(c));
    }
    for &eta in etas {
        if !(eta < 0.0) || !eta.is_finite() {
            return Err(Error::ScaledCoordinateOutOfRange {
                name: "eta",
                value: eta,
                range: "(-1/c, 0)",
            });
        }
        let edge = 1.0 + c * eta;
        if !(edge > 0.0) {
            return Err(Error::RayOutsideSupport { eta, edge });
        }
    }
    for &x in xs {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::ScaledCoordinateOutOfRange {
                name: "x",
                value: x,
                range: "(0, inf)",
            });
        }
    }
    let rel_err = etas
        .iter()
        .map(|&eta| {
            xs.iter()
                .map(|&x| {
                    let t = eta * x;
                    let wave = c * (x + c * t);
                    (evaluator(x, t) / wave - 1.0).abs()
                })
                .collect()
        })
        .collect();
    Ok(ProfileErrorTable { etas: etas.to_vec(), xs: xs.to_vec(), rel_err })
}

/// One entry of a first-order-remainder scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRow {
    pub pi_star: f64,
    pub pi2: f64,
    /// |Φ(Π*·Π₂, Π₂)/Π₂ − (1 − β·Π*)|
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderTable {
    pub rows: Vec<RemainderRow>,
}

/// Measure how fast the collapsed profile approaches its linearization:
/// the remainder of Φ/Π₂ against 1 − β·Π* over a grid of (Π*, Π₂) pairs.
/// Requires Π* ≥ 0 and Π₂ small enough that Π₁ = Π*·Π₂ < 1.
pub fn taylor_remainder_scan(m: f64, pi_stars: &[f64], pi2s: &[f64]) -> Result<RemainderTable> {
    GasParams::line(m)?;
    let mut rows = Vec::with_capacity(pi_stars.len() * pi2s.len());
    for &pi_star in pi_stars {
        if !(pi_star >= 0.0) || !pi_star.is_finite() {
            return Err(Error::ScaledCoordinateOutOfRange {
                name: "PiStar",
                value: pi_star,
                range: "[0, inf)",
            });
        }
        let asym = phi_asymptote(pi_star, m)?;
        for &pi2 in pi2s {
            let phi = dimensionless_phi(pi_star * pi2, pi2, m)?;
            rows.push(RemainderRow { pi_star, pi2, remainder: (phi / pi2 - asym).abs() });
        }
    }
    Ok(RemainderTable { rows })
}

/// Bilinear interpolation over recorded profile snapshots: linear in x along
/// each snapshot, then linear in t between the two bracketing snapshots.
/// Queries outside the recorded time span return `None`; x is clamped to the
/// grid range.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSurface {
    r: Vec<f64>,
    times: Vec<f64>,
    fields: Vec<Vec<f64>>,
}

impl SnapshotSurface {
    pub fn new(r: Vec<f64>, times: Vec<f64>, fields: Vec<Vec<f64>>) -> Result<Self> {
        if r.len() < 2 || !r.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::SurfaceGrid("a strictly increasing grid of at least 2 points".into()));
        }
        if times.len() < 2 || !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::SurfaceGrid(
                "strictly increasing snapshot times, at least 2 of them".into(),
            ));
        }
        if fields.len() != times.len() || fields.iter().any(|f| f.len() != r.len()) {
            return Err(Error::SurfaceGrid("one field per time, each on the full grid".into()));
        }
        Ok(SnapshotSurface { r, times, fields })
    }

    pub fn time_span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    pub fn value(&self, x: f64, t: f64) -> Option<f64> {
        let (t0, t1) = self.time_span();
        if t < t0 || t > t1 || !t.is_finite() || !x.is_finite() {
            return None;
        }
        let k = match self.times.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(self.times.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.times.len() - 2),
        };
        let (ta, tb) = (self.times[k], self.times[k + 1]);
        let w = (t - ta) / (tb - ta);
        let va = self.interp_x(&self.fields[k], x);
        let vb = self.interp_x(&self.fields[k + 1], x);
        Some(va + w * (vb - va))
    }

    fn interp_x(&self, field: &[f64], x: f64) -> f64 {
        let r = &self.r;
        if x <= r[0] {
            return field[0];
        }
        if x >= r[r.len() - 1] {
            return field[field.len() - 1];
        }
        let j = match r.binary_search_by(|probe| probe.partial_cmp(&x).unwrap()) {
            Ok(j) => return field[j],
            Err(j) => j - 1,
        };
        let w = (x - r[j]) / (r[j + 1] - r[j]);
        field[j] + w * (field[j + 1] - field[j])
    }
}
