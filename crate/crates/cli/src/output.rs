use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

/// Rows for the CSV form of a result.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }
}

/// What a command produced: a JSON value, its tabular form, and summary lines
/// that only the CSV needs (JSON carries them in `result`).
pub struct Report {
    pub result: Value,
    pub table: Table,
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new<T: Serialize>(result: &T, table: Table) -> Result<Self, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(Self {
            result,
            table,
            notes: Vec::new(),
        })
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// Renders the report with the resolved run spec echoed at the top.
pub fn render(
    command: &str,
    spec: &Value,
    report: &Report,
    format: Format,
) -> Result<Vec<u8>, CliError> {
    let io = |e: std::io::Error| CliError::Internal(e.to_string());
    match format {
        Format::Json => {
            let doc = json!({ "command": command, "spec": spec, "result": report.result });
            let mut out =
                serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = format!("# command: {command}\n# spec: {spec}\n").into_bytes();
            for (k, v) in &report.notes {
                out.extend(format!("# {k}: {v}\n").bytes());
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&report.table.header)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            for row in &report.table.rows {
                w.write_record(row)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
            }
            w.flush().map_err(io)?;
            w.into_inner()
                .map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}
