//! Error type for the command layer and its mapping onto process exit codes.
//!
//! The contract is three failure classes: exit 2 for configuration or
//! precondition problems (bad keys, invalid physics, unreadable files),
//! exit 3 for numerical failures (step-size or domain violations mid-run,
//! quadrature that cannot reach tolerance), and exit 4 for analysis failures
//! (a trace that never focused, too few usable samples, a slope fit with the
//! wrong sign). Success is exit 0.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Physics(#[from] pme_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// Process exit code for this failure (0 is reserved for success).
    pub fn exit_code(&self) -> i32 {
        use pme_core::Error::*;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Physics(e) => match e {
                StepTooLarge { .. } | DomainTooSmall { .. } | QuadratureTolerance { .. } => 3,
                NotFocused | InsufficientSamples { .. } | NonPositiveSlope(_) | NoInterface => 4,
                _ => 2,
            },
        }
    }

    /// Short class name used to tag failed sweep rows: the exit-code family
    /// rather than the concrete variant, so the CSV schema stays stable.
    pub fn class(&self) -> &'static str {
        match self.exit_code() {
            3 => "numerical",
            4 => "analysis",
            _ => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
