//! Conservative explicit finite-volume march for the porous medium equation
//! in density form.
//!
//! The gas density U obeys ∂tU = ∇·∇(U^m). On a uniform radial grid over
//! [0, rmax] with cell centers rᵢ = (i+½)·dx the update is
//!
//! ```text
//!     Uᵢ ← Uᵢ + dt/(rᵢ^{d−1}·dx)·(F_{i+½} − F_{i−½}),
//!     F_{i+½} = r_{i+½}^{d−1}·(W_{i+1} − W_i)/dx,   W = U^m,
//! ```
//!
//! with zero-flux walls at both ends (at d > 1 the inner face weight 0^{d−1}
//! enforces the axis condition by itself). Flux differences telescope, so the
//! discrete mass Σ Uᵢ·rᵢ^{d−1}·dx is conserved to rounding. For time steps
//! below `cfl`·dx²/(m·U_max^{m−1}·geo) — `geo` is a grid geometry factor that
//! equals 1 on the line — with cfl ≤ 0.5 the update is a monotone scheme:
//! order between states is preserved and nonnegative data stay nonnegative.
//! Degenerate diffusion makes the numerical support spread at most one cell
//! per step, so cells ahead of a front hold exact zeros, which keeps
//! free-boundary positions sharp.

use crate::error::{Error, Result};
use crate::gas::{density_from_pressure, pressure_from_density, GasParams};
use crate::trace::{InterfaceSample, InterfaceTrace};

/// Grid, stability, threshold, and schedule parameters for one march.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub params: GasParams,
    /// Outer wall position; the grid covers [0, rmax].
    pub rmax: f64,
    /// Number of cells.
    pub n: usize,
    /// Fraction of the stability bound used by adaptive stepping, in (0, 1);
    /// monotonicity is guaranteed for cfl ≤ 0.5.
    pub cfl: f64,
    /// Interface threshold as a fraction of the peak initial pressure. The
    /// default 1e−4 sits well below the pressure of a front's leading cell
    /// (which scales like dx) yet well above the creep that accumulates two
    /// or more cells ahead of a moving front (dx² and smaller), so the scan
    /// latches onto the genuine edge.
    pub eps_iface: f64,
    /// Focus-detection threshold as a fraction of the peak initial pressure.
    pub eps_focus: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// Times at which [`run`] records full density profiles.
    pub snapshot_times: Vec<f64>,
    /// Safety valve: a run exceeding this many steps aborts with an error.
    pub max_steps: u64,
}

impl SolverConfig {
    pub fn new(params: GasParams, rmax: f64, n: usize, t_start: f64, t_end: f64) -> Self {
        SolverConfig {
            params,
            rmax,
            n,
            cfl: 0.4,
            eps_iface: 1e-4,
            eps_focus: 1e-6,
            t_start,
            t_end,
            snapshot_times: Vec::new(),
            max_steps: 200_000_000,
        }
    }

    pub fn dx(&self) -> f64 {
        self.rmax / self.n as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rmax > 0.0) || !self.rmax.is_finite() {
            return Err(Error::SolverConfig(format!("rmax must be positive, got {}", self.rmax)));
        }
        if self.n < 8 {
            return Err(Error::SolverConfig(format!("need at least 8 cells, got {}", self.n)));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::SolverConfig(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        for (name, eps) in [("eps_iface", self.eps_iface), ("eps_focus", self.eps_focus)] {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::SolverConfig(format!("{name} must lie in (0, 1), got {eps}")));
            }
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || !(self.t_start < self.t_end) {
            return Err(Error::SolverConfig(format!(
                "need t_start < t_end, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if self.snapshot_times.iter().any(|t| !t.is_finite()) {
            return Err(Error::SolverConfig("snapshot times must be finite".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::SolverConfig("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Cell-averaged densities at one instant, plus the cached extrema that the
/// stability bound and the relative thresholds are resolved against.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub time: f64,
    pub u: Vec<f64>,
    /// Peak pressure of the initial data; interface/focus thresholds are
    /// fractions of this scale. Fixed at initialization.
    pub v0_max: f64,
    u_max: f64,
}

impl SimState {
    /// Wrap an explicit density vector (used by tests and external fields).
    /// The threshold scale is taken from the profile's own peak pressure.
    pub fn from_density(u: Vec<f64>, time: f64, m: f64) -> Result<Self> {
        GasParams::line(m)?;
        let mut u_max = 0.0f64;
        for &ui in &u {
            if !(ui >= 0.0) || !ui.is_finite() {
                return Err(Error::NegativeDensity(ui));
            }
            u_max = u_max.max(ui);
        }
        let v0_max = pressure_from_density(u_max, m)?;
        Ok(SimState { time, u, v0_max, u_max })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Pointwise pressures V = (m/(m−1))·U^{m−1} of the current profile.
    pub fn pressures(&self, m: f64) -> Vec<f64> {
        self.u.iter().map(|&ui| pressure_from_density(ui, m).unwrap_or(0.0)).collect()
    }
}

/// A full density profile recorded mid-run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSnapshot {
    pub time: f64,
    pub u: Vec<f64>,
}

/// Everything a march produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub state: SimState,
    pub trace: InterfaceTrace,
    pub snapshots: Vec<ProfileSnapshot>,
    pub steps: u64,
}

/// How W = U^m is evaluated; the common integer exponents avoid powf in the
/// hot loop.
#[derive(Debug, Clone, Copy)]
enum Pow {
    Square,
    Cube,
    General(f64),
}

impl Pow {
    fn of(m: f64) -> Pow {
        if m == 2.0 {
            Pow::Square
        } else if m == 3.0 {
            Pow::Cube
        } else {
            Pow::General(m)
        }
    }

    #[inline]
    fn apply(self, u: f64) -> f64 {
        match self {
            Pow::Square => u * u,
            Pow::Cube => u * u * u,
            Pow::General(m) => u.powf(m),
        }
    }
}

/// Precomputed grid weights and scratch space for repeated stepping.
struct Stepper {
    m: f64,
    pow: Pow,
    cfl: f64,
    dx: f64,
    /// Face area weights r_{i−½}^{d−1}, index 0..=n (all 1 on the line).
    face: Vec<f64>,
    /// Reciprocal cell area weights 1/rᵢ^{d−1} (all 1 on the line).
    inv_cellw: Vec<f64>,
    /// Stability geometry factor max_i (face_i + face_{i+1})/(2·rᵢ^{d−1}).
    geo: f64,
    w: Vec<f64>,
    on_line: bool,
}

impl Stepper {
    fn new(config: &SolverConfig) -> Stepper {
        let n = config.n;
        let dx = config.dx();
        let d = config.params.d;
        let on_line = d == 1;
        let (face, inv_cellw, geo) = if on_line {
            (vec![1.0; n + 1], vec![1.0; n], 1.0)
        } else {
            let e = (d - 1) as i32;
            let face: Vec<f64> = (0..=n).map(|k| (k as f64 * dx).powi(e)).collect();
            let cellw: Vec<f64> = (0..n).map(|i| config.cell_center(i).powi(e)).collect();
            let geo = (0..n)
                .map(|i| (face[i] + face[i + 1]) / (2.0 * cellw[i]))
                .fold(0.0f64, f64::max);
            (face, cellw.iter().map(|&c| 1.0 / c).collect(), geo)
        };
        Stepper {
            m: config.params.m,
            pow: Pow::of(config.params.m),
            cfl: config.cfl,
            dx,
            face,
            inv_cellw,
            geo,
            w: vec![0.0; n],
            on_line,
        }
    }

    /// Largest stable dt for the current profile: cfl·dx²/(m·U_max^{m−1}·geo).
    fn stable_dt(&self, state: &SimState) -> f64 {
        if state.u_max == 0.0 {
            return f64::INFINITY;
        }
        let rate = self.m
            * match self.pow {
                Pow::Square => state.u_max,
                Pow::Cube => state.u_max * state.u_max,
                Pow::General(m) => state.u_max.powf(m - 1.0),
            };
        self.cfl * self.dx * self.dx / (rate * self.geo)
    }

    fn advance(&mut self, state: &mut SimState, dt: f64) {
        let n = state.u.len();
        let lam = dt / (self.dx * self.dx);
        let u = &mut state.u[..n];
        let w = &mut self.w[..n];
        for i in 0..n {
            w[i] = self.pow.apply(u[i]);
        }
        let mut new_max = 0.0f64;
        let mut f_prev = 0.0; // zero flux through the left wall
        if self.on_line {
            for i in 0..n {
                let f_next = if i + 1 < n { w[i + 1] - w[i] } else { 0.0 };
                let ui = u[i] + lam * (f_next - f_prev);
                assert!(ui >= 0.0, "cell {i} went negative ({ui}) at t = {}", state.time);
                u[i] = ui;
                f_prev = f_next;
                if ui > new_max {
                    new_max = ui;
                }
            }
        } else {
            for i in 0..n {
                let f_next =
                    if i + 1 < n { self.face[i + 1] * (w[i + 1] - w[i]) } else { 0.0 };
                let ui = u[i] + lam * self.inv_cellw[i] * (f_next - f_prev);
                assert!(ui >= 0.0, "cell {i} went negative ({ui}) at t = {}", state.time);
                u[i] = ui;
                f_prev = f_next;
                if ui > new_max {
                    new_max = ui;
                }
            }
        }
        state.u_max = new_max;
        state.time += dt;
    }
}

/// Build the initial state by sampling a pressure field V0 at cell centers.
/// The data must describe a hole strictly inside the domain: V0 must vanish
/// in the first and last cells, and must be nonnegative everywhere.
pub fn init_annulus<F: Fn(f64) -> f64>(config: &SolverConfig, v0: F) -> Result<SimState> {
    config.validate()?;
    let m = config.params.m;
    let n = config.n;
    let mut u = vec![0.0; n];
    let mut v0_max = 0.0f64;
    let mut u_max = 0.0f64;
    for (i, ui) in u.iter_mut().enumerate() {
        let r = config.cell_center(i);
        let v = v0(r);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::NegativeInitialPressure { r, v });
        }
        if v > 0.0 && (i == 0 || i == n - 1) {
            return Err(Error::NoHole(r));
        }
        *ui = density_from_pressure(v, m)?;
        v0_max = v0_max.max(v);
        u_max = u_max.max(*ui);
    }
    Ok(SimState { time: config.t_start, u, v0_max, u_max })
}

/// Largest stable time step for `state` under `config` (∞ for a zero state).
pub fn stable_dt(state: &SimState, config: &SolverConfig) -> f64 {
    Stepper::new(config).stable_dt(state)
}

/// Advance one adaptive step of size cfl·(stability bound); returns the dt
/// taken. Does not clamp to `t_end` — that is [`run`]'s business.
pub fn step(state: &mut SimState, config: &SolverConfig) -> Result<f64> {
    config.validate()?;
    let mut stepper = Stepper::new(config);
    let dt = stepper.stable_dt(state);
    if !dt.is_finite() {
        return Err(Error::SolverConfig(
            "cannot take an adaptive step from an all-zero state".into(),
        ));
    }
    stepper.advance(state, dt);
    Ok(dt)
}

/// Advance one step of exactly `dt`, rejecting steps beyond the stability
/// bound. Used for lockstep comparisons between states.
pub fn step_with_dt(state: &mut SimState, config: &SolverConfig, dt: f64) -> Result<()> {
    config.validate()?;
    let mut stepper = Stepper::new(config);
    let bound = stepper.stable_dt(state) / config.cfl; // the raw stability limit
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, bound });
    }
    stepper.advance(state, dt);
    Ok(())
}

/// Locate the inner and outer free boundaries of the current profile by
/// scanning for cells whose pressure exceeds eps_iface·(peak initial
/// pressure), then extrapolating the pressure linearly to zero past the
/// outermost such cells. A single marked cell reports its own faces.
pub fn locate_interfaces(state: &SimState, config: &SolverConfig) -> Result<(f64, f64)> {
    let m = config.params.m;
    let u_thresh = density_from_pressure(config.eps_iface * state.v0_max, m)?;
    let n = state.u.len();
    let dx = config.dx();
    let i_lo = match state.u.iter().position(|&ui| ui > u_thresh) {
        Some(i) => i,
        None => return Err(Error::NoInterface),
    };
    let i_hi = n - 1 - state.u.iter().rev().position(|&ui| ui > u_thresh).unwrap();
    let r_lo = config.cell_center(i_lo);
    let r_hi = config.cell_center(i_hi);
    if i_lo == i_hi {
        return Ok((r_lo - 0.5 * dx, r_lo + 0.5 * dx));
    }
    let v = |i: usize| pressure_from_density(state.u[i], m).unwrap_or(0.0);
    // Inner edge: the line through (r_lo, v0) and (r_lo + dx, v1) hits zero at
    // r_lo − v0·dx/(v1 − v0), provided pressure grows inward from the edge.
    let (v0, v1) = (v(i_lo), v(i_lo + 1));
    let a = if v1 > v0 {
        (r_lo - v0 * dx / (v1 - v0)).clamp(r_lo - dx, r_lo)
    } else {
        r_lo - 0.5 * dx
    };
    let (v0, v1) = (v(i_hi), v(i_hi - 1));
    let b = if v1 > v0 {
        (r_hi + v0 * dx / (v1 - v0)).clamp(r_hi, r_hi + dx)
    } else {
        r_hi + 0.5 * dx
    };
    Ok((a.max(0.0), b.min(config.rmax)))
}

/// Discrete mass Σ Uᵢ·rᵢ^{d−1}·dx — the quantity the scheme conserves.
pub fn total_mass(state: &SimState, config: &SolverConfig) -> f64 {
    let dx = config.dx();
    if config.params.d == 1 {
        state.u.iter().sum::<f64>() * dx
    } else {
        let e = (config.params.d - 1) as i32;
        state
            .u
            .iter()
            .enumerate()
            .map(|(i, &ui)| ui * config.cell_center(i).powi(e))
            .sum::<f64>()
            * dx
    }
}

/// Decide whether the hole has closed: the trigger is gas in the innermost
/// cell above eps_focus·(peak initial pressure). The reported time refines
/// the trigger by fitting a least-squares line through the interface samples
/// recorded while the inner edge last crossed the band 2·dx ≤ a ≤ 14·dx and
/// extrapolating it to a = 0. The band spans a dozen cells so the sub-cell
/// sawtooth the extraction leaves on `a` averages out of the slope; with too
/// little history, or a root implausibly far from the trigger, it falls back
/// to the trigger time (itself never more than a few cell-crossings early).
pub fn detect_focus(state: &SimState, config: &SolverConfig, trace: &InterfaceTrace) -> Option<f64> {
    let u_thresh =
        density_from_pressure(config.eps_focus * state.v0_max, config.params.m).ok()?;
    if !(state.u[0] > u_thresh) {
        return None;
    }
    Some(refine_focus_time(trace, config.dx(), state.time))
}

fn refine_focus_time(trace: &InterfaceTrace, dx: f64, trigger_time: f64) -> f64 {
    // Band edges in cells: below 2 the sub-cell extraction is unreliable,
    // and 14 keeps the fit close enough to the focus that the curvature of
    // a(t) stays negligible next to the cell-scale noise.
    let band_lo = 2.0 * dx;
    let band_hi = 14.0 * dx;
    const MIN_FIT: usize = 8;
    let start = trace
        .samples
        .iter()
        .rposition(|s| s.a > band_hi)
        .map_or(0, |k| k + 1);
    let band: Vec<_> = trace.samples[start..]
        .iter()
        .filter(|s| s.a >= band_lo)
        .collect();
    if band.len() < MIN_FIT {
        return trigger_time;
    }
    let inv_n = 1.0 / band.len() as f64;
    let t_mean = band.iter().map(|s| s.t).sum::<f64>() * inv_n;
    let a_mean = band.iter().map(|s| s.a).sum::<f64>() * inv_n;
    let mut stt = 0.0;
    let mut sta = 0.0;
    for s in &band {
        stt += (s.t - t_mean) * (s.t - t_mean);
        sta += (s.t - t_mean) * (s.a - a_mean);
    }
    if stt == 0.0 {
        return trigger_time;
    }
    let slope = sta / stt;
    if !(slope < 0.0) {
        return trigger_time;
    }
    let root = t_mean - a_mean / slope;
    let last_t = band.last().unwrap().t;
    // The trigger fires while the front is still a cell or two out, so an
    // honest root lands after the last banded sample and within a few
    // cell-crossing times of the trigger. Anything else means the tail was
    // resolution-limited and the trigger itself is the better answer.
    let bound = trigger_time + 4.0 * dx / -slope;
    if root.is_finite() && root > last_t && root <= bound {
        root
    } else {
        trigger_time
    }
}

/// March from `t_start` toward `t_end` with adaptive steps, recording the
/// free boundaries every `sample_every` steps, capturing profile snapshots at
/// the first instants past each requested time, and stopping early the moment
/// the hole closes. The outer boundary approaching the wall (b > rmax − dx)
/// aborts the run — such data would feel the wall and stop being trustworthy.
pub fn run(mut state: SimState, config: &SolverConfig, sample_every: usize) -> Result<RunOutput> {
    config.validate()?;
    if sample_every == 0 {
        return Err(Error::SolverConfig("sample_every must be at least 1".into()));
    }
    let mut stepper = Stepper::new(config);
    let dx = config.dx();
    let m = config.params.m;
    let u_focus_thresh = density_from_pressure(config.eps_focus * state.v0_max, m)?;

    let mut snap_times = config.snapshot_times.clone();
    snap_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_snap = 0;

    let mut trace = InterfaceTrace::default();
    let mut snapshots = Vec::new();
    let t_eps = (config.t_end - config.t_start) * 1e-14;

    let sample = |state: &SimState, trace: &mut InterfaceTrace| -> Result<()> {
        match locate_interfaces(state, config) {
            Ok((a, b)) => {
                if b > config.rmax - dx {
                    return Err(Error::DomainTooSmall { b, rmax: config.rmax });
                }
                trace.samples.push(InterfaceSample { t: state.time, a, b });
                Ok(())
            }
            Err(Error::NoInterface) => Ok(()), // nothing to record for a zero state
            Err(e) => Err(e),
        }
    };

    sample(&state, &mut trace)?;
    while next_snap < snap_times.len() && state.time + t_eps >= snap_times[next_snap] {
        snapshots.push(ProfileSnapshot { time: state.time, u: state.u.clone() });
        next_snap += 1;
    }

    let mut steps: u64 = 0;
    loop {
        let remaining = config.t_end - state.time;
        if remaining <= t_eps {
            state.time = config.t_end;
            break;
        }
        if steps >= config.max_steps {
            return Err(Error::SolverConfig(format!(
                "exceeded max_steps = {} at t = {}",
                config.max_steps, state.time
            )));
        }
        let dt = stepper.stable_dt(&state).min(remaining);
        stepper.advance(&mut state, dt);
        steps += 1;
        while next_snap < snap_times.len() && state.time + t_eps >= snap_times[next_snap] {
            snapshots.push(ProfileSnapshot { time: state.time, u: state.u.clone() });
            next_snap += 1;
        }
        if steps % sample_every as u64 == 0 {
            sample(&state, &mut trace)?;
        }
        if state.u[0] > u_focus_thresh {
            trace.focus_time = Some(refine_focus_time(&trace, dx, state.time));
            break;
        }
    }
    Ok(RunOutput { state, trace, snapshots, steps })
}
