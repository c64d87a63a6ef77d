//! JSON and CSV rendering of command results.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::CliError;

pub const SCHEMA_VERSION: u64 = 1;

pub type Record = Map<String, Value>;

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// One JSON document, one CSV row.
    Record(Record),
    /// Header fields plus rows; the optional total row comes last in CSV.
    Table {
        header: Record,
        rows: Vec<Record>,
        total: Option<Record>,
    },
    /// NDJSON, one record per line.
    Stream(Vec<Record>),
}

/// Starts a record with the schema version and command name.
pub fn record(command: &str) -> Record {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

impl Output {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        match self {
            Output::Record(r) => writeln_json(out, &Value::Object(r.clone())),
            Output::Table { header, rows, total } => {
                let mut doc = header.clone();
                doc.insert("rows".into(), Value::Array(rows.iter().cloned().map(Value::Object).collect()));
                if let Some(t) = total {
                    doc.insert("total".into(), Value::Object(t.clone()));
                }
                writeln_json(out, &Value::Object(doc))
            }
            Output::Stream(records) => {
                for r in records {
                    serde_json::to_writer(&mut *out, r).map_err(io_error)?;
                    writeln!(out)?;
                }
                Ok(())
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let rows: Vec<&Record> = match self {
            Output::Record(r) => vec![r],
            Output::Table { rows, total, .. } => rows.iter().chain(total.iter()).collect(),
            Output::Stream(records) => records.iter().collect(),
        };
        let mut columns: Vec<&String> = Vec::new();
        for r in &rows {
            for key in r.keys() {
                if !columns.contains(&key) {
                    columns.push(key);
                }
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&columns).map_err(csv_error)?;
        for r in rows {
            w.write_record(columns.iter().map(|c| cell(r.get(*c))))
                .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => gnedin_fisher::scalar::format_f64(x),
            _ => n.to_string(),
        },
        Some(Value::Array(items)) if items.iter().all(|i| i.is_number()) => items
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        Some(other) => other.to_string(),
    }
}

fn writeln_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(io_error)?;
    writeln!(out)?;
    Ok(())
}

fn io_error(e: serde_json::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
