//! Tabular command output rendered as an aligned table, CSV or JSON.
//!
//! Column headers carry their unit in brackets, e.g. `best [GF/s]`. Column
//! order is fixed per command. CSV and table output start with a
//! `# sellkit report v1: <command>` line; JSON carries the same version in a
//! `report_version` field.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::{param, Result};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_owned(),
            inputs: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Numeric values of one column; non-numeric cells become NaN.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        Some(
            self.column(name)?
                .into_iter()
                .map(|v| v.as_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.to_table(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n"
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().cloned())
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("report_version".into(), REPORT_VERSION.into());
        obj.insert("command".into(), self.command.clone().into());
        obj.insert("inputs".into(), Value::Object(self.inputs.clone()));
        obj.insert("columns".into(), self.columns.clone().into());
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    /// Parses the JSON rendering back into a report.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| param(format!("invalid report JSON: {e}")))?;
        let bad = || param("JSON is not a sellkit report");
        let command = v
            .get("command")
            .and_then(Value::as_str)
            .ok_or_else(bad)?
            .to_owned();
        let inputs = v
            .get("inputs")
            .and_then(Value::as_object)
            .cloned()
            .unwrap_or_default();
        let columns: Vec<String> = v
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|c| c.as_str().map(str::to_owned).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|r| {
                let r = r.as_object().ok_or_else(bad)?;
                Ok(columns
                    .iter()
                    .map(|c| r.get(c).cloned().unwrap_or(Value::Null))
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            command,
            inputs,
            columns,
            rows,
        })
    }

    fn to_csv(&self) -> String {
        let mut out = format!("# sellkit report v{REPORT_VERSION}: {}\n", self.command);
        out += &self
            .columns
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for row in &self.rows {
            out += &row
                .iter()
                .map(|v| csv_field(&plain(v)))
                .collect::<Vec<_>>()
                .join(",");
            out.push('\n');
        }
        out
    }

    fn to_table(&self) -> String {
        let mut out = format!("# sellkit report v{REPORT_VERSION}: {}\n", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "#   {k} = {}", plain(v));
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(pretty).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|k| {
                cells
                    .iter()
                    .map(|r| r[k].len())
                    .chain([self.columns[k].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: &mut dyn Iterator<Item = &str>| {
            fields
                .zip(&widths)
                .map(|(f, &w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                + "\n"
        };
        out += &line(&mut self.columns.iter().map(String::as_str));
        for r in &cells {
            out += &line(&mut r.iter().map(String::as_str));
        }
        out
    }
}

/// Full-precision text of a value.
fn plain(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rounded text for the human-readable table.
fn pretty(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x != 0.0 && (x.abs() >= 1e6 || x.abs() < 1e-3) {
                format!("{x:.4e}")
            } else {
                format!("{x:.4}")
            }
        }
        Value::Null => "-".into(),
        other => plain(other),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// JSON number for a float; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["sigma", "beta", "best [GF/s]", "note"]);
        r.input("matrix", "a.mtx");
        r.push_row(vec![json!(1), num(0.5), num(1.25), json!("x,y")]);
        r.push_row(vec![json!(16), num(1.0), Value::Null, json!("")]);
        r
    }

    #[test]
    fn csv_layout() {
        let csv = sample().render(OutputFormat::Csv);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "# sellkit report v1: demo");
        assert_eq!(lines[1], "sigma,beta,best [GF/s],note");
        assert_eq!(lines[2], "1,0.5,1.25,\"x,y\"");
        assert_eq!(lines[3], "16,1.0,,");
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back = Report::from_json(&r.render(OutputFormat::Json)).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.column_f64("beta").unwrap(), vec![0.5, 1.0]);
    }

    #[test]
    fn table_shows_every_value() {
        let t = sample().render(OutputFormat::Table);
        assert!(t.contains("best [GF/s]"));
        assert!(t.contains("0.5000") && t.contains("1.2500") && t.contains("x,y"));
        assert!(t.contains("matrix = a.mtx"));
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(num(f64::NAN), Value::Null);
    }
}
