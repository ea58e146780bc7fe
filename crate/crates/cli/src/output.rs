//! Tables, their CSV/JSON encodings and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Shortest decimal that round-trips; never locale dependent.
    fn to_field(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // NaN and infinities have no JSON encoding and become null
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

/// Column-named rows. Callers push rows in their final order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Stable sort on the leading `keys` columns.
    pub fn sort_by_leading(&mut self, keys: usize) {
        let key = |c: &Cell| match c {
            Cell::Int(i) => (0, *i as f64, String::new()),
            Cell::Float(x) => (0, *x, String::new()),
            Cell::Text(s) => (1, 0.0, s.clone()),
            Cell::Bool(b) => (0, f64::from(u8::from(*b)), String::new()),
        };
        self.rows.sort_by(|x, y| {
            for k in 0..keys {
                let (a, b) = (key(&x[k]), key(&y[k]));
                let ord = a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2));
                if ord.is_ne() {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        });
    }

    /// RFC 4180: CRLF line ends, header row, quoting only where needed.
    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field))?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    /// `{"columns": [...], "rows": [{col: value, ...}, ...]}` with sorted
    /// object keys.
    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().cloned().zip(r.iter().map(Cell::to_json)).collect();
                Value::Object(obj)
            })
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn encode(table: &Table, format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => json_bytes(&table.to_json_value()),
    }
}

pub fn json_bytes(v: &Value) -> io::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Record of one run, written next to its outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tool_version: String,
    pub timestamp: String,
    /// Output file name to SHA-256 of its bytes.
    pub checksums: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "checksums": self.checksums,
        })
    }
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Writes `bytes` to `out` and returns the checksum entry for it.
pub fn emit(bytes: &[u8], out: &Path) -> io::Result<(String, String)> {
    fs::write(out, bytes)?;
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| out.display().to_string());
    Ok((name, sha256_hex(bytes)))
}

pub fn write_stdout(bytes: &[u8]) -> io::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()
}
