//! Table/CSV/JSON rendering with deterministic number formatting.

use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Where and how a command's rows get written.
#[derive(Clone, Debug)]
pub struct OutputSpec {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub precision: usize,
}

impl OutputSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(1..=17).contains(&self.precision) {
            return Err(format!("precision must lie in 1..=17, got {}", self.precision));
        }
        Ok(())
    }
}

/// One table cell; numbers keep their f64 identity so JSON can emit real
/// numbers while table/CSV render through the fixed formatter.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

/// Fixed-point below 10^6, scientific outside [1e−6, 1e6); `.` separator.
pub fn format_number(v: f64, precision: usize) -> String {
    if v == 0.0 {
        return format!("{:.*}", precision, 0.0);
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs();
    if (1e-6..1e6).contains(&mag) {
        format!("{v:.precision$}")
    } else {
        format!("{v:.precision$e}")
    }
}

fn render_cell(cell: &Cell, precision: usize) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) => format_number(*v, precision),
        Cell::Empty => String::new(),
    }
}

pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(header: Vec<&'static str>) -> Self {
        Report {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self, precision: usize) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| render_cell(c, precision)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn to_table(&self, precision: usize) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| render_cell(c, precision)).collect())
            .collect();
        for row in &rendered {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        for (i, h) in self.header.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&format!("{:<width$}", h, width = widths[i]));
        }
        out.push('\n');
        for row in &rendered {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:<width$}", cell, width = widths[i]));
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (key, cell) in self.header.iter().zip(row) {
                    let v = match cell {
                        Cell::Text(s) => json!(s),
                        Cell::Int(i) => json!(i),
                        Cell::Num(x) => json!(x),
                        Cell::Empty => Value::Null,
                    };
                    obj.insert((*key).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).unwrap();
        s.push('\n');
        s
    }

    pub fn write(&self, spec: &OutputSpec) -> std::io::Result<()> {
        let text = match spec.format {
            Format::Csv => self.to_csv(spec.precision),
            Format::Table => self.to_table(spec.precision),
            Format::Json => self.to_json(),
        };
        match &spec.path {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }
}
