//! Result tables and their CSV / JSON renderings.
//!
//! Numbers are written with 12 significant digits in scientific notation so
//! identical runs produce identical bytes.

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        "nan".into()
    }
}

fn json_num(v: f64) -> Value {
    if v.is_finite() {
        let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
        json!(rounded)
    } else {
        Value::Null
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }
}

/// One or more tables plus `key: value` metadata lines.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl ResultTable {
    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if self.tables.len() > 1 {
                out.push_str(&format!("# table: {}\n", t.name));
            }
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for r in &t.rows {
                let cells: Vec<String> = r
                    .iter()
                    .map(|c| match c {
                        Cell::Num(v) => fmt_num(*v),
                        Cell::Text(s) => s.clone(),
                    })
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        out
    }

    /// `column = value` lines for each row; meant for single-row reports.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for t in &self.tables {
            let width = t.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            for r in &t.rows {
                for (c, v) in t.columns.iter().zip(r) {
                    let v = match v {
                        Cell::Num(x) => fmt_num(*x),
                        Cell::Text(s) => s.clone(),
                    };
                    out.push_str(&format!("{c:<width$} = {v}\n"));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            // the effective configuration is itself JSON; embed it structurally
            let value = serde_json::from_str::<Value>(v).ok().filter(Value::is_object).unwrap_or(Value::String(v.clone()));
            meta.insert(k.clone(), value);
        }
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Array(
                            r.iter()
                                .map(|c| match c {
                                    Cell::Num(v) => json_num(*v),
                                    Cell::Text(s) => Value::String(s.clone()),
                                })
                                .collect(),
                        )
                    })
                    .collect();
                json!({ "name": t.name, "columns": t.columns, "rows": rows })
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({ "metadata": meta, "tables": tables })).expect("serializable");
        s.push('\n');
        s
    }
}
