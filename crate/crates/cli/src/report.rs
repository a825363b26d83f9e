//! Report tables and their CSV / JSON renderings.
//!
//! Floats carry 9 significant digits in CSV; JSON gets the shortest
//! round-trip form (at most 17). Output depends
//! only on the table contents, so identical runs are byte-identical.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    /// JSON array; `;`-joined in CSV.
    List(Vec<String>),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Metadata,
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that reads back to the rounded value; exponent form outside `[1e-4, 1e15)`.
pub fn format_float(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses");
    let a = rounded.abs();
    let s = if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest decimal that round-trips, which never exceeds 17 significant digits.
fn json_number(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(format_float(x, 17))
    }
}

impl ReportTable {
    pub fn new(columns: &[&str], metadata: Metadata) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut out = format!(
            "# command={} config_hash={} seed={} version={}\n",
            m.command, m.config_hash, m.seed, m.version
        );
        out.push_str(&self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_float(*x, 9),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => csv_escape(s),
                    Cell::Bool(b) => b.to_string(),
                    Cell::List(items) => csv_escape(&items.join(";")),
                    Cell::Null => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(x) => json_number(*x),
                        Cell::Int(i) => Value::from(*i),
                        Cell::Text(s) => Value::from(s.as_str()),
                        Cell::Bool(b) => Value::from(*b),
                        Cell::List(items) => Value::from(items.clone()),
                        Cell::Null => Value::Null,
                    };
                    obj.insert(col.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Metadata {
        Metadata {
            command: "test".into(),
            config_hash: "00".into(),
            seed: 1,
            version: "0".into(),
        }
    }

    #[test]
    fn float_digits() {
        assert_eq!(format_float(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_float(1.0 / 3.0, 17), "0.3333333333333333");
        assert_eq!(format_float(2.0, 9), "2");
        assert_eq!(format_float(-0.0, 9), "0");
        assert_eq!(format_float(f64::INFINITY, 9), "inf");
        assert_eq!(format_float(1.23456789012e-7, 9), "1.23456789e-7");
        assert_eq!(format_float(2.5e20, 17), "2.5e20");
    }

    #[test]
    fn csv_and_json_rendering() {
        let mut t = ReportTable::new(&["name", "x", "ok"], meta());
        t.push(vec!["a,b".into(), Cell::Num(0.1), true.into()]);
        let csv = t.to_csv();
        assert!(csv.ends_with("name,x,ok\n\"a,b\",0.1,true\n"), "{csv}");
        let json: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["rows"][0]["x"], Value::from(0.1));
        assert_eq!(json["metadata"]["seed"], Value::from(1));
    }

    #[test]
    fn empty_table_renders_header_only() {
        let t = ReportTable::new(&["a"], meta());
        assert_eq!(t.to_csv().lines().count(), 2);
        let json: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 0);
    }

    proptest::proptest! {
        #[test]
        fn formatted_floats_read_back(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let csv: f64 = format_float(x, 9).parse().unwrap();
            proptest::prop_assert!((csv - x).abs() <= 5e-9 * x.abs());
            let json: f64 = format_float(x, 17).parse().unwrap();
            proptest::prop_assert_eq!(json, x);
        }
    }
}
