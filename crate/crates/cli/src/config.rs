//! Run configuration: a flat `key = value` text format with dotted keys,
//! layered as defaults → config file → `--set key=value` overrides → `--out`.
//!
//! Keys are grouped by prefix (`physics.m`, `grid.n`, `fit.lo_frac`, …) but
//! the file stays flat: one assignment per line, `#` starts a comment,
//! repeated keys keep the last value. A few defaults are derived from other
//! keys when not given explicitly — `grid.rmax = 3·ξ` so the outer interface
//! (which reaches 2ξ at focus) never feels the wall, and the march window
//! `simulate.t_start = τ + 0.01|τ|`, `simulate.t_end = 0.2|τ|` brackets the
//! collapse at t ≈ 0 from either side.
//!
//! Physics preconditions are checked here, before any run starts, except for
//! sweep-list members: a sweep validates each (m, ξ, τ) combination per row
//! so that one bad member cannot abort the rest of the sweep.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use pme_core::asymptotics::FitWindow;
use pme_core::scaling::c_star_symmetric;
use pme_core::GasParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Oracle,
    Simulate,
    Analyze,
    Sweep,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Oracle => "oracle",
            Mode::Simulate => "simulate",
            Mode::Analyze => "analyze",
            Mode::Sweep => "sweep",
        };
        f.write_str(name)
    }
}

/// Fully resolved configuration for one command invocation. Serialized into
/// the manifest under the same dotted names the config file uses, so the
/// manifest echo round-trips into an equal RunConfig.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(rename = "physics.m")]
    pub m: f64,
    #[serde(rename = "physics.d")]
    pub d: usize,
    #[serde(rename = "physics.xi")]
    pub xi: f64,
    #[serde(rename = "physics.tau")]
    pub tau: f64,
    #[serde(rename = "grid.n")]
    pub n: usize,
    #[serde(rename = "grid.rmax")]
    pub rmax: f64,
    #[serde(rename = "numerics.cfl")]
    pub cfl: f64,
    #[serde(rename = "numerics.eps_iface")]
    pub eps_iface: f64,
    #[serde(rename = "numerics.eps_focus")]
    pub eps_focus: f64,
    #[serde(rename = "fit.lo_frac")]
    pub lo_frac: f64,
    #[serde(rename = "fit.hi_frac")]
    pub hi_frac: f64,
    pub output_dir: String,
    pub seed: u64,
    #[serde(rename = "oracle.times")]
    pub oracle_times: Vec<f64>,
    #[serde(rename = "simulate.t_start")]
    pub t_start: f64,
    #[serde(rename = "simulate.t_end")]
    pub t_end: f64,
    #[serde(rename = "simulate.sample_every")]
    pub sample_every: usize,
    #[serde(rename = "simulate.snapshot_times")]
    pub snapshot_times: Vec<f64>,
    #[serde(rename = "analyze.focus_time")]
    pub analyze_focus_time: Option<f64>,
    #[serde(rename = "sweep.m")]
    pub sweep_m: Vec<f64>,
    #[serde(rename = "sweep.xi")]
    pub sweep_xi: Vec<f64>,
    #[serde(rename = "sweep.tau")]
    pub sweep_tau: Vec<f64>,
    #[serde(rename = "sweep.cap")]
    pub sweep_cap: usize,
}

const KNOWN_KEYS: &[&str] = &[
    "physics.m",
    "physics.d",
    "physics.xi",
    "physics.tau",
    "grid.n",
    "grid.rmax",
    "numerics.cfl",
    "numerics.eps_iface",
    "numerics.eps_focus",
    "fit.lo_frac",
    "fit.hi_frac",
    "output_dir",
    "seed",
    "oracle.times",
    "simulate.t_start",
    "simulate.t_end",
    "simulate.sample_every",
    "simulate.snapshot_times",
    "analyze.focus_time",
    "sweep.m",
    "sweep.xi",
    "sweep.tau",
    "sweep.cap",
];

/// Parse one flat config file into a key → raw-value map. Unknown keys are
/// rejected immediately — a typo that silently fell back to a default would
/// corrupt a study much later.
fn parse_flat(text: &str, origin: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{origin}:{}: expected `key = value`, got `{line}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!(
                "{origin}:{}: unknown key `{key}`",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_f64(key: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| CliError::Config(format!("{key} = `{raw}`: not a number")))
}

fn parse_usize(key: &str, raw: &str) -> Result<usize> {
    raw.parse::<usize>()
        .map_err(|_| CliError::Config(format!("{key} = `{raw}`: not a non-negative integer")))
}

fn parse_u64(key: &str, raw: &str) -> Result<u64> {
    raw.parse::<u64>()
        .map_err(|_| CliError::Config(format!("{key} = `{raw}`: not a non-negative integer")))
}

/// Comma-separated list of numbers; the empty string is the empty list.
fn parse_list(key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(str::trim)
        .filter(|tok| !tok.is_empty())
        .map(|tok| parse_f64(key, tok))
        .collect()
}

/// Assemble a RunConfig: defaults, then the optional config file, then
/// `--set` pairs in order, then the `--out` directory override; derived
/// defaults are resolved afterwards and the result is validated.
pub fn build(
    mode: Mode,
    file: Option<&Path>,
    sets: &[String],
    out: Option<&Path>,
) -> Result<RunConfig> {
    let mut map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
            parse_flat(&text, &path.display().to_string())?
        }
        None => BTreeMap::new(),
    };
    for pair in sets {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--set `{pair}`: expected KEY=VALUE"))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("--set: unknown key `{key}`")));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    if let Some(dir) = out {
        map.insert("output_dir".into(), dir.display().to_string());
    }
    resolve(mode, &map)
}

fn resolve(mode: Mode, map: &BTreeMap<String, String>) -> Result<RunConfig> {
    let get = |key: &str| map.get(key).map(String::as_str);
    let f = |key: &str, default: f64| -> Result<f64> {
        get(key).map_or(Ok(default), |raw| parse_f64(key, raw))
    };
    let u = |key: &str, default: usize| -> Result<usize> {
        get(key).map_or(Ok(default), |raw| parse_usize(key, raw))
    };
    let list = |key: &str, default: &[f64]| -> Result<Vec<f64>> {
        get(key).map_or_else(|| Ok(default.to_vec()), |raw| parse_list(key, raw))
    };

    let m = f("physics.m", 2.0)?;
    let d = u("physics.d", 1)?;
    let xi = f("physics.xi", 1.0)?;
    let tau = f("physics.tau", -1.0)?;
    let cfg = RunConfig {
        mode,
        m,
        d,
        xi,
        tau,
        n: u("grid.n", 4000)?,
        rmax: f("grid.rmax", 3.0 * xi)?,
        cfl: f("numerics.cfl", 0.4)?,
        eps_iface: f("numerics.eps_iface", 1e-4)?,
        eps_focus: f("numerics.eps_focus", 1e-6)?,
        lo_frac: f("fit.lo_frac", 0.1)?,
        hi_frac: f("fit.hi_frac", 0.005)?,
        output_dir: get("output_dir").unwrap_or("out").to_string(),
        seed: get("seed").map_or(Ok(0), |raw| parse_u64("seed", raw))?,
        oracle_times: list("oracle.times", &[-0.5])?,
        t_start: f("simulate.t_start", tau + 0.01 * tau.abs())?,
        t_end: f("simulate.t_end", 0.2 * tau.abs())?,
        sample_every: u("simulate.sample_every", 50)?,
        snapshot_times: list("simulate.snapshot_times", &[])?,
        analyze_focus_time: match get("analyze.focus_time") {
            Some(raw) => Some(parse_f64("analyze.focus_time", raw)?),
            None => None,
        },
        sweep_m: list("sweep.m", &[m])?,
        sweep_xi: list("sweep.xi", &[xi])?,
        sweep_tau: list("sweep.tau", &[tau])?,
        sweep_cap: u("sweep.cap", 256)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Fail-fast checks: physics preconditions through the gas/scaling
    /// constructors (so messages name the violated precondition with its
    /// value) and plain range checks on the plumbing. Sweep-list members are
    /// deliberately not checked here — they are judged per row.
    pub fn validate(&self) -> Result<()> {
        GasParams::line(self.m)?;
        if self.d != 1 {
            return Err(CliError::Config(format!(
                "physics.d = {}: this laboratory runs on the line (d = 1)",
                self.d
            )));
        }
        c_star_symmetric(self.xi, self.tau, self.m)?;
        if self.n < 16 {
            return Err(CliError::Config(format!("grid.n = {}: need n ≥ 16", self.n)));
        }
        if !(self.rmax.is_finite() && self.rmax > 0.0) {
            return Err(CliError::Config(format!(
                "grid.rmax = {}: need a finite positive domain",
                self.rmax
            )));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(CliError::Config(format!(
                "numerics.cfl = {}: need 0 < cfl < 1",
                self.cfl
            )));
        }
        for (key, eps) in [
            ("numerics.eps_iface", self.eps_iface),
            ("numerics.eps_focus", self.eps_focus),
        ] {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(CliError::Config(format!(
                    "{key} = {eps}: thresholds are fractions of the peak initial pressure"
                )));
            }
        }
        FitWindow::new(self.lo_frac, self.hi_frac)?;
        if self.sample_every == 0 {
            return Err(CliError::Config(
                "simulate.sample_every = 0: need at least 1".into(),
            ));
        }
        if self.sweep_cap == 0 {
            return Err(CliError::Config("sweep.cap = 0: need at least 1".into()));
        }
        match self.mode {
            Mode::Oracle => {
                for &t in &self.oracle_times {
                    if !(t > self.tau && t <= 0.0) {
                        return Err(CliError::Config(format!(
                            "oracle.times: t = {t} outside the pre-focus window ({} , 0]",
                            self.tau
                        )));
                    }
                }
            }
            Mode::Simulate => {
                if !(self.t_start > self.tau) {
                    return Err(CliError::Config(format!(
                        "simulate.t_start = {} must lie after the release time τ = {}",
                        self.t_start, self.tau
                    )));
                }
                if !(self.t_end > self.t_start) {
                    return Err(CliError::Config(format!(
                        "simulate window empty: t_start = {}, t_end = {}",
                        self.t_start, self.t_end
                    )));
                }
            }
            Mode::Analyze | Mode::Sweep => {}
        }
        Ok(())
    }

    /// The fit window for c* estimation, revalidated from the stored fractions.
    pub fn fit_window(&self) -> Result<FitWindow> {
        Ok(FitWindow::new(self.lo_frac, self.hi_frac)?)
    }
}
