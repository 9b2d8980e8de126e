//! Command-line laboratory for the porous-medium hole-filling problem.
//!
//! The binary front-end (`pme-focus`) wires four commands over the numerical
//! core: `oracle` (closed-form reference profiles), `simulate` (conservative
//! march of the focusing pair with free-boundary tracking), `analyze`
//! (focusing-speed fit and error tables from a recorded trace), and `sweep`
//! (the simulate→analyze pipeline over a parameter grid, in parallel, with
//! deterministic output bytes).
//!
//! Everything is also exposed as a library so studies can be driven without
//! shelling out: [`config::build`] resolves a configuration the same way the
//! binary does, and the functions in [`commands`] are the subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod writers;

pub use config::{Mode, RunConfig};
pub use error::CliError;
