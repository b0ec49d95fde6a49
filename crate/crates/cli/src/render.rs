//! Human-readable rendering of a report.
//!
//! Numbers within 1e-12 of a fraction `p/q` with `q ≤ 64` print as that
//! fraction; objects shaped like a [`JsonMatrix`](crate::json::JsonMatrix)
//! print as a grid.

use std::fmt::Write;

use serde_json::{Map, Value};

const MAX_DENOMINATOR: i64 = 64;
const RATIONAL_TOL: f64 = 1e-12;

/// `"p/q"` for the smallest `q ≤ 64` within tolerance, else `None`.
pub fn as_rational(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    for q in 1..=MAX_DENOMINATOR {
        let p = (x * q as f64).round();
        if (x - p / q as f64).abs() <= RATIONAL_TOL {
            let p = p as i64;
            return Some(if p == 0 {
                "0".to_string()
            } else if q == 1 {
                p.to_string()
            } else {
                format!("{p}/{q}")
            });
        }
    }
    None
}

pub fn number(x: f64) -> String {
    as_rational(x).unwrap_or_else(|| format!("{x:.6}"))
}

fn complex(re: f64, im: f64) -> String {
    if im.abs() <= RATIONAL_TOL {
        return number(re);
    }
    if re.abs() <= RATIONAL_TOL {
        return format!("{}i", number(im));
    }
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", number(re), number(im.abs()))
}

fn matrix_fields(map: &Map<String, Value>) -> Option<(usize, usize, Vec<f64>, Vec<f64>)> {
    let rows = map.get("rows")?.as_u64()? as usize;
    let cols = map.get("cols")?.as_u64()? as usize;
    let floats = |key: &str| -> Option<Vec<f64>> { map.get(key)?.as_array()?.iter().map(Value::as_f64).collect() };
    let re = floats("re")?;
    let im = floats("im").unwrap_or_default();
    (re.len() == rows * cols).then_some((rows, cols, re, im))
}

fn grid(out: &mut String, indent: usize, rows: usize, cols: usize, re: &[f64], im: &[f64]) {
    let cells: Vec<String> = (0..rows * cols)
        .map(|i| complex(re[i], im.get(i).copied().unwrap_or(0.0)))
        .collect();
    let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
    for r in 0..rows {
        let line: Vec<String> = (0..cols).map(|c| format!("{:>width$}", cells[r * cols + c])).collect();
        let _ = writeln!(out, "{:indent$}[ {} ]", "", line.join("  "));
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_i64() {
            Some(i) => i.to_string(),
            None => number(n.as_f64().unwrap_or(f64::NAN)),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| x.is_number() || x.is_boolean() || x.is_null()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn value(out: &mut String, indent: usize, key: &str, v: &Value) {
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{:indent$}{key}: {s}", "");
        return;
    }
    match v {
        Value::Object(map) => {
            if let Some((rows, cols, re, im)) = matrix_fields(map) {
                let _ = writeln!(out, "{:indent$}{key}: {rows}x{cols}", "");
                grid(out, indent + 2, rows, cols, &re, &im);
            } else {
                let _ = writeln!(out, "{:indent$}{key}:", "");
                for (k, x) in map {
                    value(out, indent + 2, k, x);
                }
            }
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{:indent$}{key}:", "");
            for (i, x) in items.iter().enumerate() {
                match x {
                    Value::String(s) => {
                        let _ = writeln!(out, "{:w$}- {s}", "", w = indent + 2);
                    }
                    _ => value(out, indent + 2, &format!("[{i}]"), x),
                }
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

pub fn pretty(report: &Value) -> String {
    let mut out = String::new();
    match report {
        Value::Object(map) => {
            for (k, v) in map {
                value(&mut out, 0, k, v);
            }
        }
        other => value(&mut out, 0, "value", other),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fractions() {
        assert_eq!(as_rational(1.0 / 6.0).as_deref(), Some("1/6"));
        assert_eq!(as_rational(4.0 / 18.0).as_deref(), Some("2/9"));
        assert_eq!(as_rational(-1.0 / 3.0).as_deref(), Some("-1/3"));
        assert_eq!(as_rational(1.0 / 64.0).as_deref(), Some("1/64"));
        assert_eq!(as_rational(2.0).as_deref(), Some("2"));
        assert_eq!(as_rational(-1e-17).as_deref(), Some("0"));
        assert_eq!(as_rational(1.0 / 65.0), None);
        assert_eq!(as_rational(0.5f64.sqrt()), None);
    }

    #[test]
    fn matrices_render_as_grids() {
        let v = serde_json::json!({
            "m": {"type": "matrix", "rows": 2, "cols": 2, "re": [1.0/3.0, 0.0, 0.0, 0.5], "im": [0.0, 0.25, -0.25, 0.0]}
        });
        let text = pretty(&v);
        assert!(text.contains("m: 2x2"));
        assert!(text.contains("1/3"));
        assert!(text.contains("1/4i"));
        assert!(text.contains("-1/4i"));
    }
}
