//! Command-line front end: job configuration, mesh export and JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod mesh;
pub mod report;

pub use commands::{run, Cli, Command, Outcome};
pub use error::CliError;

/// Sizes the global worker pool from `ISO_ZMC_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ISO_ZMC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("ISO_ZMC_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}
