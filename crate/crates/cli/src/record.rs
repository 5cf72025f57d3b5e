//! Run records and their CSV/JSON emission.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const ARTIFACT: &str = "tdme";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub t_end: f64,
    pub n_steps: usize,
    pub h: f64,
}

/// Engine output checked against a registered closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleCheck {
    pub fn new(name: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_deviation,
            tolerance,
            // NaN deviations fail
            passed: max_deviation <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub artifact: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub config: ScenarioConfig,
    pub grid: GridInfo,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub report: Value,
    pub oracles: Vec<OracleCheck>,
}

impl RunRecord {
    pub fn failed_oracles(&self) -> Vec<&OracleCheck> {
        self.oracles.iter().filter(|o| !o.passed).collect()
    }

    /// The record without its rows, for terminal display.
    pub fn summary(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("record serializes");
        if let Value::Object(map) = &mut v {
            map.remove("rows");
            map.insert("row_count".into(), self.rows.len().into());
        }
        v
    }
}

/// Writes the rows with a header; every value carries 17 significant digits.
pub fn emit_csv(record: &RunRecord, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path.display(), e))?;
    let mut writer = csv::Writer::from_writer(file);
    writer
        .write_record(&record.columns)
        .map_err(|e| CliError::io(path.display(), e))?;
    for row in &record.rows {
        writer
            .write_record(row.iter().map(|v| format!("{v:.16e}")))
            .map_err(|e| CliError::io(path.display(), e))?;
    }
    writer.flush().map_err(|e| CliError::io(path.display(), e))
}

pub fn emit_json(record: &RunRecord, path: &Path) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec(record).map_err(|e| CliError::io(path.display(), e))?;
    bytes.push(b'\n');
    File::create(path)
        .and_then(|mut f| f.write_all(&bytes))
        .map_err(|e| CliError::io(path.display(), e))
}
