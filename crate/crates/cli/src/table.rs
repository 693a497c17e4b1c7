//! Deterministic table emission.
//!
//! Every table has a header row and a fixed column order; floats are
//! printed with 17 significant digits so identical invocations produce
//! byte-identical files. JSON mirrors the CSV as an array of objects in
//! the same column order (non-finite values become null there).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    OptFloat(Option<f64>),
    OptUInt(Option<u64>),
    Bool(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    fn csv_cell(cell: &Cell, out: &mut String) {
        match cell {
            Cell::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Float(v) => {
                let _ = write!(out, "{v:.16e}");
            }
            Cell::OptFloat(Some(v)) => {
                let _ = write!(out, "{v:.16e}");
            }
            Cell::OptUInt(Some(v)) => {
                let _ = write!(out, "{v}");
            }
            Cell::OptFloat(None) | Cell::OptUInt(None) => {}
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                Self::csv_cell(cell, &mut out);
            }
            out.push('\n');
        }
        out
    }

    fn json_cell(cell: &Cell) -> Value {
        match cell {
            Cell::UInt(v) => Value::Number(Number::from(*v)),
            Cell::Float(v) | Cell::OptFloat(Some(v)) => {
                Number::from_f64(*v).map_or(Value::Null, Value::Number)
            }
            Cell::OptUInt(Some(v)) => Value::Number(Number::from(*v)),
            Cell::OptFloat(None) | Cell::OptUInt(None) => Value::Null,
            Cell::Bool(v) => Value::Bool(*v),
        }
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    object.insert((*name).to_string(), Self::json_cell(cell));
                }
                Value::Object(object)
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&Value::Array(rows)).expect("table is valid JSON");
        text.push('\n');
        text
    }

    /// Render and write to the path, or to stdout when no path is given.
    pub fn emit(&self, output: Option<&Path>, format: OutputFormat) -> io::Result<()> {
        let text = match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        };
        match output {
            Some(path) => fs::write(path, text),
            None => io::stdout().write_all(text.as_bytes()),
        }
    }
}
