//! Exact, deterministic rendering of results as text or JSON.
//!
//! Rationals print as `p/q` (integers without `/1`). JSON carries them as
//! strings so no precision is lost.

use psat_core::{Distribution, Interval, RationalMatrix};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Feasibility verdict with its witness, if any.
pub fn decision(witness: Option<&Distribution>, format: Format) -> String {
    match (witness, format) {
        (Some(u), Format::Text) => {
            let support: Vec<String> = u.support().map(|(j, w)| format!("{j}:{w}")).collect();
            format!("status: feasible\nwitness: {}\n", support.join(" "))
        }
        (None, Format::Text) => "status: infeasible\n".to_string(),
        (Some(u), Format::Json) => line(&json!({ "status": "feasible", "support": support_json(u) })),
        (None, Format::Json) => line(&json!({ "status": "infeasible" })),
    }
}

/// `{"support": [[index, "weight"], ...]}` entries for the nonzero weights.
pub fn support_json(u: &Distribution) -> Value {
    Value::Array(u.support().map(|(j, w)| json!([j, w.to_string()])).collect())
}

pub fn interval(i: &Interval, format: Format) -> String {
    match format {
        Format::Text => format!("{i}\n"),
        Format::Json => line(&json!({ "min": i.lo().to_string(), "max": i.hi().to_string() })),
    }
}

pub fn matrix(m: &RationalMatrix, format: Format) -> String {
    match format {
        Format::Text => m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n")
            .collect(),
        Format::Json => {
            let rows: Vec<Vec<String>> =
                m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            line(&json!({ "rows": rows }))
        }
    }
}

pub fn vector(v: &[psat_core::Rational], format: Format) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    match format {
        Format::Text => items.join(" ") + "\n",
        Format::Json => line(&json!({ "vector": items })),
    }
}

pub(crate) fn line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}
