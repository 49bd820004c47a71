//! Tabular output in csv, markdown or json.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
    Json,
}

/// A cell keeps the exact value for json and the rounded text for csv and markdown.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num { value: f64, shown: String },
    Text(String),
    Empty,
}

impl Cell {
    pub fn num(value: f64, shown: impl Into<String>) -> Self {
        Self::Num { value, shown: shown.into() }
    }

    /// Shortest text that parses back to `value`.
    pub fn exact(value: f64) -> Self {
        Self::num(value, format!("{value}"))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Self::Text(s.into())
    }

    fn shown(&self) -> String {
        match self {
            Self::Num { shown, .. } => shown.clone(),
            Self::Text(s) => s.clone(),
            Self::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num { value, .. } => serde_json::Number::from_f64(*value).map_or(Value::Null, Value::Number),
            Self::Text(s) => Value::String(s.clone()),
            Self::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub key: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(key: &str, title: &str, columns: &[&str]) -> Self {
        Self {
            key: key.into(),
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::shown)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    fn markdown(&self) -> String {
        let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
        let mut out = line(self.columns.clone());
        out += &line(self.columns.iter().map(|_| "---".to_string()).collect());
        for row in &self.rows {
            out += &line(row.iter().map(|c| c.shown().replace('|', "\\|")).collect());
        }
        out
    }

    pub fn json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Renders one or more tables. A single json table is an array of records;
/// several are an object keyed by table.
pub fn render(tables: &[Table], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let v = match tables {
                [one] => one.json_value(),
                many => Value::Object(many.iter().map(|t| (t.key.clone(), t.json_value())).collect()),
            };
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
        OutputFormat::Csv => match tables {
            [one] => one.csv(),
            many => many.iter().map(|t| format!("# {}\n{}", t.title, t.csv())).collect::<Vec<_>>().join("\n"),
        },
        OutputFormat::Markdown => {
            tables.iter().map(|t| format!("**{}**\n\n{}", t.title, t.markdown())).collect::<Vec<_>>().join("\n")
        }
    }
}
