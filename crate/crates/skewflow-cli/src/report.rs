//! JSON-lines run reports.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const SCHEMA: &str = "skewflow.report/1";

/// One line of a report. `elapsed_ms` is the only field allowed to differ
/// between identical runs.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_capacity: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_sets: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rdists: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    pub checks_passed: bool,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: &'static str, instance: &Path) -> Self {
        Report { schema: SCHEMA, command, instance: instance.display().to_string(), checks_passed: true, ..Default::default() }
    }

    pub fn append(&self, path: &Path) -> std::io::Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        let line = serde_json::to_string(self).expect("report serializes");
        writeln!(f, "{line}")
    }
}
