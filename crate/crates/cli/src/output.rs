//! Tables rendered as CSV (with a `#` provenance line) or JSON.

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(i64),
    Num(f64),
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // non-finite values become null
            Cell::Num(x) => json!(x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self::from_columns(columns.iter().map(|c| c.to_string()).collect())
    }

    pub fn from_columns(columns: Vec<String>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, rc: &RunConfig) -> String {
        match format {
            Format::Csv => self.csv(rc),
            Format::Json => self.json(rc),
        }
    }

    fn csv(&self, rc: &RunConfig) -> String {
        let mut out = format!("# minkest {} {}", env!("CARGO_PKG_VERSION"), rc.command());
        for (k, v) in rc.settings() {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
        for (k, v) in rc.notes() {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, rc: &RunConfig) -> String {
        let pairs = |kv: &[(String, String)]| -> Map<String, Value> {
            kv.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect()
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.clone(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "tool": "minkest",
            "version": env!("CARGO_PKG_VERSION"),
            "command": rc.command(),
            "config": pairs(rc.settings()),
            "notes": pairs(rc.notes()),
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("tables serialize");
        s.push('\n');
        s
    }
}
