//! Report envelope and writers. Reports carry no timestamps or timings so a
//! fixed spec always produces the same bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::spec::{Command, ExperimentSpec, Format};
use crate::BenchError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub format_version: u32,
    pub command: Command,
    pub spec: ExperimentSpec,
    /// `None` for pure measurements.
    pub passed: Option<bool>,
    pub result: Value,
}

/// A finished run: the report, its CSV rendering, the process exit code and
/// a few lines for the terminal.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: String,
    pub exit_code: i32,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn render(&self, format: Format) -> Result<String, BenchError> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.report)? + "\n",
            Format::Csv => self.csv.clone(),
        })
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), BenchError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

/// Serializes `rows` as CSV with a header taken from the first row's fields.
pub fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
