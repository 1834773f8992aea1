//! Tabular reports rendered as JSON or CSV.

use num_rational::BigRational;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    /// Rendered as `"0 2"` in CSV and as an array in JSON.
    Set(Vec<u32>),
    /// Exact rational, always `p/q`.
    Rational(String),
    Null,
}

impl Cell {
    pub fn rational(r: &BigRational) -> Cell {
        Cell::Rational(format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::UInt(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) | Cell::Rational(s) => Value::String(s.clone()),
            Cell::Set(xs) => Value::Array(xs.iter().map(|&x| Value::from(x)).collect()),
            Cell::Null => Value::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) | Cell::Rational(s) => csv_escape(s, false),
            Cell::Set(xs) => {
                let joined: Vec<String> = xs.iter().map(u32::to_string).collect();
                csv_escape(&joined.join(" "), true)
            }
            Cell::Null => String::new(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::UInt(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::UInt(v as u64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

fn csv_escape(s: &str, force: bool) -> String {
    if force || s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One report: scalar fields, an optional table, and trailing summary fields.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub schema: &'static str,
    pub fields: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(&'static str, Cell)>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl Report {
    pub fn new(schema: &'static str) -> Self {
        Report {
            schema,
            fields: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn field(mut self, name: &'static str, value: impl Into<Cell>) -> Self {
        self.fields.push((name, value.into()));
        self
    }

    pub fn columns(mut self, columns: &[&'static str]) -> Self {
        self.columns = columns.to_vec();
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn footer(mut self, name: &'static str, value: impl Into<Cell>) -> Self {
        self.footer.push((name, value.into()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert(
            "schema".into(),
            Value::String(format!("numsemi.{}/{SCHEMA_VERSION}", self.schema)),
        );
        for (k, v) in &self.fields {
            obj.insert((*k).into(), v.to_json());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    let row: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| ((*c).to_string(), v.to_json()))
                        .collect();
                    Value::Object(row)
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
        }
        for (k, v) in &self.footer {
            obj.insert((*k).into(), v.to_json());
        }
        let mut out = serde_json::to_string(&Value::Object(obj)).expect("report serializes");
        out.push('\n');
        out
    }

    /// Without a table, the scalar fields form a one-row table. With a
    /// table, scalars follow it as `# name,value` lines.
    fn to_csv(&self) -> String {
        let line = |cells: Vec<String>| cells.join(",") + "\n";
        let mut out = String::new();
        if self.columns.is_empty() {
            let all: Vec<&(&str, Cell)> = self.fields.iter().chain(&self.footer).collect();
            out += &line(all.iter().map(|(k, _)| k.to_string()).collect());
            out += &line(all.iter().map(|(_, v)| v.to_csv()).collect());
            return out;
        }
        out += &line(self.columns.iter().map(|c| c.to_string()).collect());
        for r in &self.rows {
            out += &line(r.iter().map(Cell::to_csv).collect());
        }
        for (k, v) in self.fields.iter().chain(&self.footer) {
            out += &format!("# {k},{}\n", v.to_csv());
        }
        out
    }
}
