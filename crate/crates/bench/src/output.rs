//! CSV and JSON persistence.

use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::error::{BenchError, Result};
use crate::experiment::ExperimentTable;

/// CSV header, in order.
pub const COLUMNS: [&str; 12] = [
    "trial",
    "alg_value",
    "greedy_value",
    "exact_value",
    "ratio_greedy",
    "ratio_exact",
    "shortlist_size",
    "cap",
    "value_queries",
    "indep_queries",
    "buffer_hwm",
    "ms",
];

/// Trial rows, then the `mean`, `stddev`, `min` and `max` rows. Missing
/// exact values are empty fields.
pub fn to_csv(table: &ExperimentTable) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let fail = |e: csv::Error| BenchError::Output(e.to_string());
    writer.write_record(COLUMNS).map_err(fail)?;
    for row in &table.trials {
        writer.serialize(row).map_err(fail)?;
    }
    for row in &table.summary {
        writer.serialize(row).map_err(fail)?;
    }
    let bytes = writer.into_inner().map_err(|e| BenchError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `{"config": .., "trials": [..], "summary": [..]}` with CSV field names.
pub fn to_json(table: &ExperimentTable) -> String {
    serde_json::to_string_pretty(table).expect("table serializes")
}

pub fn render(table: &ExperimentTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => Ok(to_json(table) + "\n"),
    }
}

/// Writes to `path`, or to stdout when there is none.
pub fn write_output(table: &ExperimentTable, path: Option<&Path>, format: Format) -> Result<()> {
    let text = render(table, format)?;
    match path {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| BenchError::io(parent, e))?;
            }
            std::fs::write(path, text).map_err(|e| BenchError::io(path, e))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| BenchError::io("<stdout>", e)),
    }
}
