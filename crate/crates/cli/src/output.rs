//! Deterministic CSV/JSON emission. Every artifact starts with a header
//! block echoing the artifact version and the fully resolved configuration;
//! the CSV header re-parses to the identical [`RunConfig`].

use std::io::Write;

use crate::config::RunConfig;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output table: named columns plus rows of cells.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// A single CSV/JSON cell. Floats print in shortest round-trip form, so
/// identical configs yield byte-identical files.
#[derive(Debug, Clone)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => quote_csv(s),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::UInt(v) => serde_json::json!(v),
            Cell::Float(v) => serde_json::json!(v),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

/// RFC-4180-style quoting: quote when the field contains a comma, a quote,
/// or a line break; double embedded quotes.
fn quote_csv(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render the artifact as CSV with the config header block.
pub fn to_csv(cfg: &RunConfig, table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&format!("# version = {ARTIFACT_VERSION}\n"));
    out.push_str(&format!(
        "# config = {}\n",
        serde_json::to_string(cfg).expect("config serializes")
    ));
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Render the artifact as a single JSON document.
pub fn to_json(cfg: &RunConfig, table: &Table) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (c, v) in table.columns.iter().zip(row) {
                obj.insert((*c).into(), v.json());
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "version": ARTIFACT_VERSION,
        "config": cfg,
        "data": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// Parse the config line back out of a CSV header block.
#[cfg(test)]
pub fn parse_csv_header(text: &str) -> Option<RunConfig> {
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# config = ") {
            return serde_json::from_str(rest).ok();
        }
    }
    None
}

pub fn write_artifact(cfg: &RunConfig, table: &Table, out: Option<&str>) -> std::io::Result<()> {
    let text = match cfg.format.as_str() {
        "csv" => to_csv(cfg, table),
        _ => to_json(cfg, table),
    };
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
        }
    }
}
