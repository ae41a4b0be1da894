//! Deterministic CSV/JSON writers.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64. JSON carries numbers as decimal strings so no
//! reader silently truncates them.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{OutputFormat, ScenarioConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON string holding a formatted number.
pub fn jnum(x: f64) -> Value {
    Value::String(num(x))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// One output file pair: a summary plus a table.
#[derive(Debug, Clone)]
pub struct Report {
    /// File stem, e.g. `sweep`.
    pub stem: String,
    pub kind: &'static str,
    pub notes: Vec<String>,
    pub summary: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(stem: impl Into<String>, kind: &'static str, columns: Vec<&'static str>) -> Self {
        Report { stem: stem.into(), kind, notes: Vec::new(), summary: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.summary.push((key.to_string(), value));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Numeric summary entry parsed back from its decimal string.
    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.as_str()?.parse().ok()
    }

    pub fn to_csv(&self, config: &ScenarioConfig) -> Result<Vec<u8>, csv::Error> {
        let mut buf = Vec::new();
        let mut header = format!(
            "# rydberg-eit {} {}\n# schema_version = {SCHEMA_VERSION}\n",
            env!("CARGO_PKG_VERSION"),
            self.kind
        );
        for n in &self.notes {
            header.push_str(&format!("# {n}\n"));
        }
        for line in config.physics_text().lines() {
            header.push_str(&format!("# config: {line}\n"));
        }
        for (k, v) in &self.summary {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            header.push_str(&format!("# summary: {k} = {text}\n"));
        }
        buf.extend_from_slice(header.as_bytes());
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        Ok(buf)
    }

    pub fn to_json(&self, config: &ScenarioConfig) -> Value {
        let summary: serde_json::Map<String, Value> = self.summary.iter().cloned().collect();
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "generator": format!("rydberg-eit {}", env!("CARGO_PKG_VERSION")),
            "kind": self.kind,
            "notes": self.notes,
            "config": config.physics_text().lines().collect::<Vec<_>>(),
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        })
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Write each report as `<stem>.csv` and/or `<stem>.json` into `dir`.
pub fn write_reports(
    reports: &[Report],
    config: &ScenarioConfig,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for r in reports {
        if format.csv() {
            let path = dir.join(format!("{}.csv", r.stem));
            let bytes = r
                .to_csv(config)
                .map_err(|e| CliError::io(&path, std::io::Error::new(std::io::ErrorKind::Other, e)))?;
            write_file(&path, &bytes)?;
            written.push(path);
        }
        if format.json() {
            let path = dir.join(format!("{}.json", r.stem));
            let mut text = serde_json::to_string_pretty(&r.to_json(config)).expect("JSON values serialize");
            text.push('\n');
            write_file(&path, text.as_bytes())?;
            written.push(path);
        }
    }
    Ok(written)
}
