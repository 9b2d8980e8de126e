//! The run manifest: one JSON document per output directory recording the
//! binary version, the fully resolved configuration, the constants derived
//! from it (β, B, A, M, p, c*), the files written, headline results, and any
//! warnings. Given the same binary version, the echoed config reproduces the
//! run; everything in the file is deterministic except `wall_time_s`, which
//! is kept as the last field so determinism checks can ignore it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use pme_core::barenblatt::{focusing_amplitude, mass};
use pme_core::scaling::c_star_symmetric;
use pme_core::GasParams;

/// Constants fixed by (m, ξ, τ) alone: the similarity exponent β, the
/// profile constant B, the amplitude A that focuses the hole at t = 0, the
/// mass integral M of a field of that amplitude, and the focusing speed
/// c* = p·β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub beta: f64,
    pub big_b: f64,
    pub amplitude: f64,
    pub mass: f64,
    pub p: f64,
    pub c_star: f64,
}

impl DerivedConstants {
    pub fn for_physics(m: f64, xi: f64, tau: f64) -> Result<Self> {
        let params = GasParams::line(m)?;
        let amplitude = focusing_amplitude(xi, tau, m)?;
        let star = c_star_symmetric(xi, tau, m)?;
        Ok(DerivedConstants {
            beta: params.beta,
            big_b: params.big_b,
            amplitude,
            mass: mass(amplitude, m)?,
            p: star.p,
            c_star: star.c_star,
        })
    }
}

/// Headline results; fields stay `null` when the mode does not produce them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunResults {
    pub focus_time: Option<f64>,
    pub steps: Option<u64>,
    pub final_time: Option<f64>,
    pub mass_drift_rel: Option<f64>,
    pub c_hat: Option<f64>,
    pub c_hat_stderr: Option<f64>,
    pub rel_err: Option<f64>,
    /// Times at which profile snapshots were actually recorded.
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub derived: DerivedConstants,
    pub outputs: Vec<String>,
    pub results: RunResults,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command: &str, config: RunConfig, derived: DerivedConstants) -> Self {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            derived,
            outputs: Vec::new(),
            results: RunResults::default(),
            warnings: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Config(format!("manifest serialization: {e}")))?;
        text.push('\n');
        crate::writers::write_string(path, &text)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
