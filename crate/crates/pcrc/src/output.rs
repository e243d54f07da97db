//! Text emission. Every number is printed with at most 12 significant
//! digits so golden files are stable.

use std::fmt::Write as _;

use pcrc_core::{BoundKind, PowerSplit, RateTriple};
use serde::Serialize;
use serde_json::Value;

/// Header of the region CSV, in column order.
pub const CSV_HEADER: &str = "alpha,beta,r0,r1,r2,kind";

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal form of [`round12`].
pub fn fmt12(x: f64) -> String {
    round12(x).to_string()
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with sorted keys and rounded floats, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let rounded = round_value(serde_json::to_value(value)?);
    let mut text = serde_json::to_string_pretty(&rounded)?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct RegionRow {
    pub alpha: f64,
    pub beta: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub kind: BoundKind,
}

impl RegionRow {
    pub fn new(split: PowerSplit, pt: RateTriple, kind: BoundKind) -> Self {
        RegionRow {
            alpha: split.alpha(),
            beta: split.beta(),
            r0: pt.r0,
            r1: pt.r1,
            r2: pt.r2,
            kind,
        }
    }
}

pub fn region_csv(rows: &[RegionRow]) -> String {
    let mut out = String::with_capacity(48 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt12(r.alpha),
            fmt12(r.beta),
            fmt12(r.r0),
            fmt12(r.r1),
            fmt12(r.r2),
            r.kind
        );
    }
    out
}
