use negacantor::rational::{format as fmt_rational, parse, to_decimal};
use negacantor::Rational;
use serde_json::{Map, Value as Json};

use crate::grammar::InputError;
use crate::Format;

pub fn rat(x: &Rational) -> String {
    fmt_rational(x)
}

pub enum Cell {
    Int(u64),
    Rat(Rational),
    Num(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(r) => rat(r),
            Cell::Num(v) => v.to_string(),
        }
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn csv(&self, approx: Option<usize>) -> String {
        let rational: Vec<bool> = (0..self.header.len())
            .map(|i| self.rows.first().is_some_and(|r| matches!(r[i], Cell::Rat(_))))
            .collect();
        let mut header = self.header.clone();
        if approx.is_some() {
            for (h, &r) in self.header.iter().zip(&rational) {
                if r {
                    header.push(format!("{h}_approx"));
                }
            }
        }
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut cells: Vec<String> = row.iter().map(Cell::text).collect();
            if let Some(n) = approx {
                for cell in row {
                    if let Cell::Rat(r) = cell {
                        cells.push(to_decimal(r, n));
                    }
                }
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// A command's result: always a JSON document, sometimes also a table.
pub struct Report {
    json: Json,
    table: Option<Table>,
}

impl Report {
    pub fn json(json: Json) -> Self {
        Report { json, table: None }
    }

    pub fn with_table(json: Json, table: Table) -> Self {
        Report {
            json,
            table: Some(table),
        }
    }

    pub fn render(self, format: Format, approx: Option<usize>) -> Result<String, InputError> {
        match format {
            Format::Json => {
                let doc = match approx {
                    Some(n) => with_approx(self.json, n),
                    None => self.json,
                };
                Ok(format!("{doc}\n"))
            }
            Format::Csv => match &self.table {
                Some(t) => Ok(t.csv(approx)),
                None => Err(InputError::Usage("csv output is not available for this command".into())),
            },
            Format::Text => {
                let doc = match approx {
                    Some(n) => with_approx(self.json, n),
                    None => self.json,
                };
                Ok(text(&doc))
            }
        }
    }
}

fn as_rational(v: &Json) -> Option<Rational> {
    match v {
        Json::String(s) if s.contains('/') => parse(s),
        _ => None,
    }
}

/// Adds a `<key>_approx` decimal next to every rational string field.
fn with_approx(doc: Json, n: usize) -> Json {
    match doc {
        Json::Object(m) => {
            let mut out = Map::new();
            for (k, v) in m {
                let approx = as_rational(&v).map(|r| to_decimal(&r, n));
                out.insert(k.clone(), with_approx(v, n));
                if let Some(a) = approx {
                    out.insert(format!("{k}_approx"), Json::String(a));
                }
            }
            Json::Object(out)
        }
        Json::Array(items) => Json::Array(items.into_iter().map(|v| with_approx(v, n)).collect()),
        other => other,
    }
}

/// One `key: value` line per top-level field; strings are unquoted.
fn text(doc: &Json) -> String {
    let render = |v: &Json| match v {
        Json::String(s) => s.clone(),
        other => other.to_string(),
    };
    match doc {
        Json::Object(m) => m.iter().map(|(k, v)| format!("{k}: {}\n", render(v))).collect(),
        other => format!("{}\n", render(other)),
    }
}
