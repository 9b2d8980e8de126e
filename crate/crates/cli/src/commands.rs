//! The four commands behind the binary.
//!
//! `oracle` evaluates the closed-form fields on the configured grid: the
//! point-mass pressure released at (ξ, τ), the symmetric focusing pair, and
//! the traveling wave of speed c* — the three rulers everything else is
//! measured against. `simulate` marches the pair's initial data with the
//! conservative scheme and records the free boundaries. `analyze` turns a
//! recorded trace into a focusing-speed estimate plus first-order-remainder
//! and wave-profile error tables. `sweep` runs the simulate→analyze pipeline
//! over a Cartesian grid of (m, ξ, τ), in parallel, writing one CSV row per
//! combination in lexicographic parameter order regardless of which worker
//! finished first.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::manifest::{DerivedConstants, RunManifest};
use crate::writers::{g17, interface_csv, profile_csv, write_string};
use pme_core::asymptotics::{estimate_c_star, normalize_time, profile_convergence};
use pme_core::barenblatt::BarenblattField;
use pme_core::barenblatt::focusing_pair_pressure;
use pme_core::gas::density_from_pressure;
use pme_core::graveleau;
use pme_core::scaling::c_star_symmetric;
use pme_core::solver::{init_annulus, run, total_mass, SolverConfig};
use pme_core::trace::{InterfaceSample, InterfaceTrace};
use pme_core::GasParams;

/// Π* values and Π₂ ladder for the remainder table, and the rays/positions
/// for the wave-profile table. Fixed rather than configurable: they are the
/// report format, not the experiment.
const REMAINDER_PI_STARS: [f64; 3] = [0.2, 0.5, 0.8];
const REMAINDER_PI2S: [f64; 3] = [1e-2, 1e-3, 1e-4];
const PROFILE_ETAS: [f64; 3] = [-0.1, -0.3, -0.6];
const PROFILE_XS: [f64; 3] = [0.2, 0.1, 0.05];

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir).map_err(CliError::io(&dir))?;
    Ok(dir)
}

/// Write the three exact profiles (point-mass, pair, traveling wave) at each
/// requested time. An empty time list still writes the manifest — the
/// derived constants are the useful part for quick lookups.
pub fn oracle(cfg: &RunConfig) -> Result<RunManifest> {
    let started = Instant::now();
    let dir = out_dir(cfg)?;
    let derived = DerivedConstants::for_physics(cfg.m, cfg.xi, cfg.tau)?;
    let field = BarenblattField::focusing(cfg.m, cfg.xi, cfg.tau)?;
    let mut manifest = RunManifest::new("oracle", cfg.clone(), derived);

    let dx = cfg.rmax / cfg.n as f64;
    for (k, &t) in cfg.oracle_times.iter().enumerate() {
        let mut bare = Vec::with_capacity(cfg.n);
        let mut pair = Vec::with_capacity(cfg.n);
        let mut wave = Vec::with_capacity(cfg.n);
        for i in 0..cfg.n {
            let r = (i as f64 + 0.5) * dx;
            let vb = field.pressure(r, t)?;
            let vp = focusing_pair_pressure(r, t, cfg.xi, cfg.tau, cfg.m)?;
            let vw = graveleau::pressure(r, t, derived.c_star);
            bare.push((r, density_from_pressure(vb, cfg.m)?, vb));
            pair.push((r, density_from_pressure(vp, cfg.m)?, vp));
            wave.push((r, density_from_pressure(vw, cfg.m)?, vw));
        }
        for (name, rows) in [
            (format!("barenblatt_{k}.csv"), bare),
            (format!("graveleau_{k}.csv"), wave),
            (format!("pair_{k}.csv"), pair),
        ] {
            write_string(&dir.join(&name), &profile_csv(rows))?;
            manifest.outputs.push(name);
        }
    }
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(&dir.join("manifest.json"))?;
    Ok(manifest)
}

fn solver_config(cfg: &RunConfig, params: GasParams) -> SolverConfig {
    let mut sc = SolverConfig::new(params, cfg.rmax, cfg.n, cfg.t_start, cfg.t_end);
    sc.cfl = cfg.cfl;
    sc.eps_iface = cfg.eps_iface;
    sc.eps_focus = cfg.eps_focus;
    sc.snapshot_times = cfg.snapshot_times.clone();
    sc
}

/// March the focusing pair from t_start, recording interfaces and snapshots.
pub fn simulate(cfg: &RunConfig) -> Result<RunManifest> {
    let started = Instant::now();
    let dir = out_dir(cfg)?;
    let derived = DerivedConstants::for_physics(cfg.m, cfg.xi, cfg.tau)?;
    let params = GasParams::line(cfg.m)?;
    let sc = solver_config(cfg, params);
    let field = BarenblattField::focusing(cfg.m, cfg.xi, cfg.tau)?;
    let init = init_annulus(&sc, |r| {
        field.pressure(r, cfg.t_start).expect("t_start > tau was validated")
    })?;
    let mass_start = total_mass(&init, &sc);
    let out = run(init, &sc, cfg.sample_every)?;
    let mass_drift = ((total_mass(&out.state, &sc) - mass_start) / mass_start).abs();

    let mut manifest = RunManifest::new("simulate", cfg.clone(), derived);
    write_string(&dir.join("interface.csv"), &interface_csv(&out.trace.samples))?;
    manifest.outputs.push("interface.csv".into());
    for (k, snap) in out.snapshots.iter().enumerate() {
        let rows = snap.u.iter().enumerate().map(|(i, &u)| {
            let v = pme_core::gas::pressure_from_density(u, cfg.m)
                .expect("the march keeps densities non-negative");
            (sc.cell_center(i), u, v)
        });
        let name = format!("prof_{k}.csv");
        write_string(&dir.join(&name), &profile_csv(rows))?;
        manifest.outputs.push(name);
        manifest.results.snapshot_times.push(snap.time);
    }
    manifest.results.focus_time = out.trace.focus_time;
    manifest.results.steps = Some(out.steps);
    manifest.results.final_time = Some(out.state.time);
    manifest.results.mass_drift_rel = Some(mass_drift);
    if cfg.n < 128 {
        manifest.warnings.push(format!(
            "grid.n = {} is coarse (below 128); profiles and fits are qualitative only",
            cfg.n
        ));
    }
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(&dir.join("manifest.json"))?;
    Ok(manifest)
}

/// The contents of cstar.json.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub c_hat: f64,
    pub stderr: f64,
    pub c_star_exact: f64,
    pub rel_err: f64,
}

fn parse_interface_csv(text: &str, origin: &Path) -> Result<Vec<InterfaceSample>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("t,a,b") {
        return Err(CliError::Config(format!(
            "{}: expected header `t,a,b`",
            origin.display()
        )));
    }
    let mut samples = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let mut next = |name: &str| -> Result<f64> {
            fields
                .next()
                .and_then(|tok| tok.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "{}:{}: bad {name} field in `{line}`",
                        origin.display(),
                        k + 2
                    ))
                })
        };
        samples.push(InterfaceSample { t: next("t")?, a: next("a")?, b: next("b")? });
    }
    Ok(samples)
}

/// Fit the focusing speed from a recorded trace and write the report files:
/// cstar.json, taylor_remainder.csv, profile_error.csv. The focus time comes
/// from `analyze.focus_time` when set, else from the manifest next to the
/// trace; a trace with no known focus is an analysis failure, distinct from
/// unreadable or malformed inputs.
pub fn analyze(cfg: &RunConfig) -> Result<Analysis> {
    let dir = out_dir(cfg)?;
    let trace_path = dir.join("interface.csv");
    let text = std::fs::read_to_string(&trace_path).map_err(CliError::io(&trace_path))?;
    let samples = parse_interface_csv(&text, &trace_path)?;
    let focus_time = cfg.analyze_focus_time.or_else(|| {
        RunManifest::read(&dir.join("manifest.json"))
            .ok()
            .and_then(|m| m.results.focus_time)
    });
    let trace = InterfaceTrace { samples, focus_time };

    let shifted = normalize_time(&trace)?;
    let window = cfg.fit_window()?;
    let est = estimate_c_star(&shifted, &window, cfg.tau, graveleau::ALPHA_STAR)?;
    let exact = c_star_symmetric(cfg.xi, cfg.tau, cfg.m)?;
    let analysis = Analysis {
        c_hat: est.c_hat,
        stderr: est.stderr,
        c_star_exact: exact.c_star,
        rel_err: (est.c_hat - exact.c_star).abs() / exact.c_star,
    };
    let mut json = serde_json::to_string_pretty(&analysis)
        .map_err(|e| CliError::Config(format!("cstar serialization: {e}")))?;
    json.push('\n');
    write_string(&dir.join("cstar.json"), &json)?;

    let remainder =
        pme_core::asymptotics::taylor_remainder_scan(cfg.m, &REMAINDER_PI_STARS, &REMAINDER_PI2S)?;
    let mut table = String::from("pi_star,pi2,remainder\n");
    for row in &remainder.rows {
        table.push_str(&format!(
            "{},{},{}\n",
            g17(row.pi_star),
            g17(row.pi2),
            g17(row.remainder)
        ));
    }
    write_string(&dir.join("taylor_remainder.csv"), &table)?;

    // Closed-form wave-approach table for the configured physics: the pair
    // pressure against the traveling wave of speed c*, along rays t = η·x.
    let profile = profile_convergence(
        |x, t| {
            focusing_pair_pressure(x, t, cfg.xi, cfg.tau, cfg.m)
                .expect("rays stay inside the pre-focus window")
        },
        exact.c_star,
        &PROFILE_ETAS,
        &PROFILE_XS,
    )?;
    let mut table = String::from("eta,x,rel_err\n");
    for (i, &eta) in profile.etas.iter().enumerate() {
        for (j, &x) in profile.xs.iter().enumerate() {
            table.push_str(&format!(
                "{},{},{}\n",
                g17(eta),
                g17(x),
                g17(profile.rel_err[i][j])
            ));
        }
    }
    write_string(&dir.join("profile_error.csv"), &table)?;
    Ok(analysis)
}

/// One sweep row: constants when the physics is valid, an `error:<class>`
/// tag in the c_hat column when any stage failed.
struct SweepRow {
    m: f64,
    xi: f64,
    tau: f64,
    p: f64,
    beta: f64,
    c_star_exact: f64,
    c_hat_cell: String,
    rel_err: f64,
    failure: Option<CliError>,
}

fn sorted_dedup(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup_by(|a, b| a.total_cmp(b) == std::cmp::Ordering::Equal);
    v
}

/// Cartesian grid of sweep parameters in lexicographic (m, ξ, τ) order.
fn sweep_combos(cfg: &RunConfig) -> Result<Vec<(f64, f64, f64)>> {
    let ms = sorted_dedup(&cfg.sweep_m);
    let xis = sorted_dedup(&cfg.sweep_xi);
    let taus = sorted_dedup(&cfg.sweep_tau);
    let count = ms.len() * xis.len() * taus.len();
    if count > cfg.sweep_cap {
        return Err(CliError::Config(format!(
            "sweep would run {count} combinations, above the cap of {} (raise sweep.cap if intended)",
            cfg.sweep_cap
        )));
    }
    let mut combos = Vec::with_capacity(count);
    for &m in &ms {
        for &xi in &xis {
            for &tau in &taus {
                combos.push((m, xi, tau));
            }
        }
    }
    Ok(combos)
}

/// simulate → analyze for one combination, entirely in memory. The march
/// window and the domain follow the combination, not the base config: the
/// window brackets the collapse of *this* τ, and the domain keeps the base
/// config's domain-to-hole ratio so a swept ξ never outgrows the box.
fn combo_estimate(
    base: &RunConfig,
    params: GasParams,
    xi: f64,
    tau: f64,
) -> Result<pme_core::asymptotics::CStarEstimate> {
    let t_start = tau + 0.01 * tau.abs();
    let t_end = 0.2 * tau.abs();
    let rmax = (base.rmax / base.xi) * xi;
    let mut sc = SolverConfig::new(params, rmax, base.n, t_start, t_end);
    sc.cfl = base.cfl;
    sc.eps_iface = base.eps_iface;
    sc.eps_focus = base.eps_focus;
    let field = BarenblattField::focusing(params.m, xi, tau)?;
    let state = init_annulus(&sc, |r| {
        field.pressure(r, t_start).expect("t_start > tau by construction")
    })?;
    let out = run(state, &sc, base.sample_every)?;
    let shifted = normalize_time(&out.trace)?;
    let window = base.fit_window()?;
    Ok(estimate_c_star(&shifted, &window, tau, graveleau::ALPHA_STAR)?)
}

fn run_combo(base: &RunConfig, m: f64, xi: f64, tau: f64) -> SweepRow {
    let mut row = SweepRow {
        m,
        xi,
        tau,
        p: f64::NAN,
        beta: f64::NAN,
        c_star_exact: f64::NAN,
        c_hat_cell: String::new(),
        rel_err: f64::NAN,
        failure: None,
    };
    let constants = GasParams::line(m)
        .and_then(|params| Ok((params, c_star_symmetric(xi, tau, m)?)))
        .map_err(CliError::from);
    let (params, star) = match constants {
        Ok(v) => v,
        Err(e) => {
            row.c_hat_cell = format!("error:{}", e.class());
            row.failure = Some(e);
            return row;
        }
    };
    row.p = star.p;
    row.beta = params.beta;
    row.c_star_exact = star.c_star;
    match combo_estimate(base, params, xi, tau) {
        Ok(est) => {
            row.rel_err = (est.c_hat - star.c_star).abs() / star.c_star;
            row.c_hat_cell = g17(est.c_hat);
        }
        Err(e) => {
            row.c_hat_cell = format!("error:{}", e.class());
            row.failure = Some(e);
        }
    }
    row
}

/// Run the full pipeline over the parameter grid. Rows are computed on a
/// rayon pool of `jobs` workers (default: available parallelism) and written
/// in parameter order; every row's arithmetic is confined to its own worker,
/// so the bytes of sweep.csv do not depend on the worker count. The first
/// failed row (in parameter order) decides the exit, after all outputs are
/// written.
pub fn sweep(cfg: &RunConfig, jobs: Option<usize>) -> Result<RunManifest> {
    let started = Instant::now();
    let dir = out_dir(cfg)?;
    let derived = DerivedConstants::for_physics(cfg.m, cfg.xi, cfg.tau)?;
    let combos = sweep_combos(cfg)?;

    let threads = match jobs {
        Some(0) => return Err(CliError::Config("--jobs 0: need at least one worker".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map(usize::from).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        combos
            .par_iter()
            .map(|&(m, xi, tau)| run_combo(cfg, m, xi, tau))
            .collect()
    });

    let mut text = String::from("m,xi,tau,p,beta,c_star_exact,c_hat,rel_err\n");
    for row in &rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            g17(row.m),
            g17(row.xi),
            g17(row.tau),
            g17(row.p),
            g17(row.beta),
            g17(row.c_star_exact),
            row.c_hat_cell,
            g17(row.rel_err)
        ));
    }
    write_string(&dir.join("sweep.csv"), &text)?;

    let mut manifest = RunManifest::new("sweep", cfg.clone(), derived);
    manifest.outputs.push("sweep.csv".into());
    let failed = rows.iter().filter(|r| r.failure.is_some()).count();
    if failed > 0 {
        manifest
            .warnings
            .push(format!("{failed} of {} sweep rows failed", rows.len()));
    }
    manifest.wall_time_s = started.elapsed().as_secs_f64();
    manifest.write(&dir.join("manifest.json"))?;

    match rows.into_iter().find_map(|r| r.failure) {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}
