use serde_json::{json, Value};

use crate::error::CliError;
use crate::manifest::{Arithmetic, Command, ExperimentManifest, Format};

pub const TOOL: &str = "pathex";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub arithmetic: Arithmetic,
    pub manifest: ExperimentManifest,
    pub result: Value,
    pub table: Option<Table>,
    /// Number of failed envelope checks (certify only).
    pub failures: usize,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command.name(),
            "arithmetic": self.arithmetic.name(),
            "manifest": self.manifest.for_report(),
            "result": self.result,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
                text.push('\n');
                Ok(text)
            }
            Format::Csv => {
                let table = self.table.as_ref().ok_or_else(|| {
                    CliError::Usage(format!("{} reports are not tabular; use --format json", self.command.name()))
                })?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.headers).map_err(|e| CliError::Io(e.to_string()))?;
                for row in &table.rows {
                    w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
        }
    }
}
