//! Deterministic tabular output: named columns, typed cells, CSV and JSON
//! renderings that are byte-stable for a fixed input.  Floats are rounded to
//! 12 significant digits in both formats; log-scale columns carry a `_log2`
//! name suffix by convention.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::UInt(v)
    }
}
impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}
impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Value::Empty)
    }
}

/// Formats a float with 12 significant digits, deterministically.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    format!("{x:.11e}")
}

/// Rounds a float to its 12-significant-digit rendering.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    fmt_float(x).parse().unwrap_or(x)
}

impl Value {
    fn csv_cell(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Float(v) => fmt_float(*v),
            Value::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Value::Empty => String::new(),
        }
    }

    fn json_cell(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Float(v) => {
                if v.is_finite() {
                    let r = round_sig(*v);
                    // JSON numbers cannot carry a trailing exponent form with
                    // full fidelity issues; emit the shortest roundtrip text.
                    let mut s = format!("{r}");
                    if !s.contains(['.', 'e', 'E']) {
                        s.push_str(".0");
                    }
                    s
                } else {
                    format!("\"{}\"", self.csv_cell())
                }
            }
            Value::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Value::Empty => "null".to_string(),
        }
    }
}

/// Recognized output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid(format!("unknown format {other}"))),
        }
    }
}

/// A result table with a fixed column order.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; the width must match the header.
    pub fn push(&mut self, row: Vec<Value>) {
        assert!(row.len() == self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON array of row objects, keys in column order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str("  {");
            for (j, (col, val)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let key = serde_json::to_string(col).expect("string serializes");
                write!(out, "{key}: {}", val.json_cell()).unwrap();
            }
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Renders fully in memory first, so errors leave no partial file.
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let text = self.render(format);
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_a_header_only_csv() {
        let r = Report::new(&["a", "b_log2"]);
        assert_eq!(r.to_csv(), "a,b_log2\n");
        assert_eq!(r.to_json(), "[\n]\n");
    }

    #[test]
    fn identical_input_renders_identical_bytes() {
        let mut r = Report::new(&["x", "y"]);
        r.push(vec![Value::UInt(3), Value::Float(0.125)]);
        let a = (r.to_csv(), r.to_json());
        let b = (r.to_csv(), r.to_json());
        assert_eq!(a, b);
    }

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let mut r = Report::new(&["v"]);
        for x in [0.6533, -1.0 / 3.0, 2.0f64.powi(-40), 123456.789] {
            r.push(vec![Value::Float(x)]);
        }
        let parsed: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let csv = r.to_csv();
        for (line, obj) in csv.lines().skip(1).zip(parsed.as_array().unwrap()) {
            let from_csv: f64 = line.parse().unwrap();
            let from_json = obj["v"].as_f64().unwrap();
            assert_eq!(from_csv, from_json);
        }
    }

    #[test]
    fn floats_print_twelve_significant_digits() {
        assert_eq!(fmt_float(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_float(0.0), "0");
    }

    #[test]
    fn text_cells_escape_csv_metacharacters() {
        let mut r = Report::new(&["s"]);
        r.push(vec![Value::Text("a,b\"c".into())]);
        assert_eq!(r.to_csv(), "s\n\"a,b\"\"c\"\n");
    }
}
