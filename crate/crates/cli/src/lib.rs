//! Scenario runner for time-deformed master equations: configuration
//! ingestion, the scenario catalogue and CSV/JSON emission.

pub mod builtins;
pub mod config;
pub mod error;
pub mod record;
pub mod scenarios;

use std::path::Path;

pub use config::{parse_config, Engine, Scenario, ScenarioConfig};
pub use error::CliError;
pub use record::{emit_csv, emit_json, RunRecord};
pub use scenarios::run_scenario;

/// Reads and validates a configuration file with overrides applied.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    parse_config(&text, overrides)
}

/// Sizes the global thread pool from `TDME_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("TDME_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("TDME_THREADS: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("TDME_THREADS: {e}")))
}
