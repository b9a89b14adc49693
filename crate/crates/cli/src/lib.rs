//! Command-line front end for `ioncosmo-core`: config parsing, parameter
//! sweeps and deterministic CSV/JSON output.

#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod emit;
pub mod report;
pub mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{emit_config, parse_config, ConfigError, ExperimentConfig, Format};
pub use emit::emit;
pub use sweep::{run_sweep, SweepResult};

/// Failures surfaced by the binary, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config file or flag.
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    /// Bad value on the command line.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Numerical failure.
    #[error("numerical failure: {0}")]
    Numeric(#[from] ioncosmo_core::Error),
    /// A single-point evaluation failed; the row was still written.
    #[error("numerical failure: {0}")]
    PointFailed(String),
    /// Quadrature and closed form disagreed at some self-test points.
    #[error("self-test failed at {0} points")]
    SelftestFailed(usize),
    /// Reading or writing a file failed.
    #[error("{}: {source}", path.display())]
    Io {
        /// File concerned.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 2 config, 3 numerics, 4 io.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Argument(_) => 2,
            Self::Numeric(_) | Self::PointFailed(_) | Self::SelftestFailed(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}
