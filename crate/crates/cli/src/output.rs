//! Rendering of command results as CSV, JSON lines, or aligned text.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
    Pretty,
}

/// One table of results with a fixed column order.
#[derive(Clone, Debug)]
pub struct Output {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// nested records for JSON lines; when absent each row becomes an object
    pub json: Option<Vec<Value>>,
}

impl Output {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Self {
        Output { schema, columns: columns.to_vec(), rows: Vec::new(), json: None }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn with_json(mut self, records: Vec<Value>) -> Self {
        self.json = Some(records);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
            Format::Pretty => self.pretty(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn jsonl(&self) -> String {
        let records: Vec<Value> = match &self.json {
            Some(j) => j.clone(),
            None => self
                .rows
                .iter()
                .map(|row| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect()))
                .collect(),
        };
        let mut out = String::new();
        for rec in records {
            let mut m = Map::new();
            m.insert("schema".into(), Value::String(self.schema.into()));
            match rec {
                Value::Object(fields) => m.extend(fields),
                other => {
                    m.insert("value".into(), other);
                }
            }
            out.push_str(&Value::Object(m).to_string());
            out.push('\n');
        }
        out
    }

    fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let mut out = String::new();
        if cells.len() == 1 {
            let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            for (c, v) in self.columns.iter().zip(&cells[0]) {
                out.push_str(&format!("{c:<width$}  {v}").trim_end().to_string());
                out.push('\n');
            }
            return out;
        }
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |vals: Vec<&str>| -> String {
            let parts: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(self.columns.clone()));
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

/// Flat text form of a JSON value: lists are joined with `;`.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}
