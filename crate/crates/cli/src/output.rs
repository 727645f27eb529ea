use serde::Serialize;
use serde_json::{Map, Value};

/// One output value. Exact integers that may exceed 2^53 travel as strings
/// in JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Big(String),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Big(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(x) => Value::from(x),
                Err(_) => Value::from(v.to_string()),
            },
            Cell::Big(s) | Cell::Text(s) => Value::from(s.clone()),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        match i128::try_from(v) {
            Ok(x) => Cell::Int(x),
            Err(_) => Cell::Big(v.to_string()),
        }
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

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&num_bigint::BigUint> for Cell {
    fn from(v: &num_bigint::BigUint) -> Self {
        Cell::Big(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| quote(&c.csv())).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, command: &str, p: Option<u64>) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            tool_version: &'a str,
            p: Option<u64>,
            command: &'a str,
            rows: Vec<Map<String, Value>>,
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                self.columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect()
            })
            .collect();
        let doc = Doc {
            tool_version: crate::TOOL_VERSION,
            p,
            command,
            rows,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
