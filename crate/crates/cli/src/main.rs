use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pme_focus::commands;
use pme_focus::config::{self, Mode};
use pme_focus::error::Result;

#[derive(Parser)]
#[command(
    name = "pme-focus",
    version,
    about = "Numerical laboratory for porous-medium hole-filling: exact profiles, conservative marches, focusing-speed fits, and parameter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file (dotted keys, `#` comments)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set grid.n=2000 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (overrides output_dir from the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write closed-form reference profiles (point-mass, pair, wave) as CSV
    Oracle(RunArgs),
    /// March the focusing pair and record interfaces, snapshots, manifest
    Simulate(RunArgs),
    /// Fit the focusing speed from a recorded trace and write error tables
    Analyze(RunArgs),
    /// Run simulate→analyze over a (m, xi, tau) grid into one sweep.csv
    Sweep(RunArgs),
}

fn dispatch(mode: Mode, args: &RunArgs) -> Result<()> {
    let cfg = config::build(mode, args.config.as_deref(), &args.set, args.out.as_deref())?;
    match mode {
        Mode::Oracle => {
            let manifest = commands::oracle(&cfg)?;
            println!(
                "wrote {} profile files and manifest.json to {}",
                manifest.outputs.len(),
                cfg.output_dir
            );
        }
        Mode::Simulate => {
            let manifest = commands::simulate(&cfg)?;
            match manifest.results.focus_time {
                Some(t) => println!(
                    "focused at t = {t:.6e} after {} steps; outputs in {}",
                    manifest.results.steps.unwrap_or(0),
                    cfg.output_dir
                ),
                None => println!(
                    "no focus by t = {:.6e}; outputs in {}",
                    manifest.results.final_time.unwrap_or(cfg.t_end),
                    cfg.output_dir
                ),
            }
        }
        Mode::Analyze => {
            let analysis = commands::analyze(&cfg)?;
            println!(
                "c_hat = {:.6e} (c* = {:.6e}, rel err {:.3e}); tables in {}",
                analysis.c_hat, analysis.c_star_exact, analysis.rel_err, cfg.output_dir
            );
        }
        Mode::Sweep => {
            let manifest = commands::sweep(&cfg, args.jobs)?;
            println!("sweep.csv written to {}", cfg.output_dir);
            for warning in &manifest.warnings {
                eprintln!("warning: {warning}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Oracle(args) => (Mode::Oracle, args),
        Command::Simulate(args) => (Mode::Simulate, args),
        Command::Analyze(args) => (Mode::Analyze, args),
        Command::Sweep(args) => (Mode::Sweep, args),
    };
    match dispatch(mode, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
