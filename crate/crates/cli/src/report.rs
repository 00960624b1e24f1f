//! Rendering of tabular results: RFC 4180 CSV, aligned text or JSON.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", csv_line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", csv_line(row))?;
                }
            }
            Format::Table => {
                let mut width: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in width.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
                    padded.join("  ")
                };
                writeln!(out, "{}", line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().cloned().zip(row.iter().map(|c| json_cell(c))).collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Integers that fit `i64` and short decimals become JSON numbers; anything
/// else (big integers, fractions, text, empty) stays a string.
fn json_cell(cell: &str) -> Value {
    if let Ok(v) = cell.parse::<i64>() {
        return Value::from(v);
    }
    if cell.contains('.') && cell.len() <= 24 {
        if let Ok(v) = cell.parse::<f64>() {
            if v.is_finite() {
                return Value::from(v);
            }
        }
    }
    if cell.is_empty() {
        return Value::Null;
    }
    Value::from(cell)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_line(cells: &[String]) -> String {
    cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",")
}
