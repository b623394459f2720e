//! Serialization helpers and the json/csv/plain renderers.

use quadrep::dirichlet::SeriesEval;
use quadrep::BigRational;
use serde_json::{json, Map, Value};

use crate::config::OutputFormat;

const EXACT_LIMIT: u64 = 1 << 53;

/// Integers at or above 2^53 in absolute value become decimal strings.
pub fn int(v: impl Into<i128>) -> Value {
    let v: i128 = v.into();
    if v.unsigned_abs() >= EXACT_LIMIT as u128 {
        Value::String(v.to_string())
    } else {
        json!(v as i64)
    }
}

/// Always `"num/den"`, also for integers.
pub fn rational(q: &BigRational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn series(e: &SeriesEval) -> Value {
    json!({ "value": float(e.value), "truncation": int(e.truncation), "tail_bound": float(e.tail_bound) })
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        OutputFormat::Csv => render_csv(v),
        OutputFormat::Plain => render_plain(v),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A list of uniform records becomes a table; anything else a single row.
fn render_csv(v: &Value) -> String {
    let rows: Vec<Vec<(String, String)>> = match v {
        Value::Array(items) => items
            .iter()
            .map(|item| {
                let mut row = Vec::new();
                flatten("", item, &mut row);
                row
            })
            .collect(),
        other => {
            let mut row = Vec::new();
            flatten("", other, &mut row);
            vec![row]
        }
    };
    let Some(first) = rows.first() else {
        return String::new();
    };
    let mut out = first.iter().map(|(k, _)| csv_field(k)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in &rows {
        out += &row.iter().map(|(_, v)| csv_field(v)).collect::<Vec<_>>().join(",");
        out.push('\n');
    }
    out
}

fn render_plain(v: &Value) -> String {
    let mut pairs = Vec::new();
    match v {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&i.to_string(), item, &mut pairs);
            }
        }
        other => flatten("", other, &mut pairs),
    }
    pairs.into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
