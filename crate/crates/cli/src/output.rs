//! Tabular results rendered as CSV or JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::Format;

/// One named result table. Cells are JSON scalars so both renderings share
/// the exact same number formatting.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// Finite numbers as JSON numbers; NaN and infinities as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(format!("{x}"))
    }
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(r.iter().cloned()).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => serde_json::to_string_pretty(&self.to_json_value()).expect("json") + "\n",
        }
    }

    pub fn file_name(&self, format: Format) -> String {
        match format {
            Format::Csv => format!("{}.csv", self.name),
            Format::Json => format!("{}.json", self.name),
        }
    }
}

/// Writes each table to `dir`, returning the created paths in order.
pub fn write_tables(dir: &Path, tables: &[Table], format: Format) -> std::io::Result<Vec<PathBuf>> {
    tables
        .iter()
        .map(|t| {
            let p = dir.join(t.file_name(format));
            std::fs::write(&p, t.render(format))?;
            Ok(p)
        })
        .collect()
}

/// All tables as one stdout document.
pub fn render_stdout(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => {
            if tables.len() == 1 {
                return tables[0].to_csv();
            }
            tables
                .iter()
                .map(|t| format!("# {}\n{}", t.name, t.to_csv()))
                .collect::<Vec<_>>()
                .join("\n")
        }
        Format::Json => {
            let obj: Map<String, Value> = tables.iter().map(|t| (t.name.clone(), t.to_json_value())).collect();
            serde_json::to_string_pretty(&Value::Object(obj)).expect("json") + "\n"
        }
    }
}
