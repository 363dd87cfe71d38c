use serde::{Deserialize, Serialize};

use super::experiments::INDEX_COLUMNS;
use super::manifest::SCHEMA_VERSION;
use super::sweep::SWEEP_COLUMNS;
use crate::besov::NORM_REPORT_COLUMNS;
use crate::dispersion::{FIT_FIELDS, ORACLE_COLUMNS};

/// Layout of one output file: CSV header or JSON object keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSchema {
    pub file: String,
    pub format: String,
    pub schema_version: u32,
    pub columns: Vec<String>,
}

pub const MANIFEST_FIELDS: [&str; 7] = ["schema_version", "kind", "hash", "seed", "config", "members", "outputs"];
pub const VERDICT_FIELDS: [&str; 4] = ["kind", "manifest_hash", "verdicts", "outputs"];

fn schema(file: &str, format: &str, columns: &[&str]) -> OutputSchema {
    OutputSchema {
        file: file.into(),
        format: format.into(),
        schema_version: SCHEMA_VERSION,
        columns: columns.iter().map(|c| c.to_string()).collect(),
    }
}

/// Every file the harness writes.
pub fn output_schemas() -> Vec<OutputSchema> {
    vec![
        schema("sweep_report.csv", "csv", &SWEEP_COLUMNS),
        schema("oracle.csv", "csv", &ORACLE_COLUMNS),
        schema("fit.json", "json-array", &FIT_FIELDS),
        schema("norm_report.csv", "csv", &NORM_REPORT_COLUMNS),
        schema("index.csv", "csv", &INDEX_COLUMNS),
        schema("manifest.json", "json", &MANIFEST_FIELDS),
        schema("verdicts.json", "json", &VERDICT_FIELDS),
    ]
}
