//! Check reports and their text/JSON rendering.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Fail,
    ParamError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::ParamError => "param-error",
        }
    }
}

/// One check outcome. `params` is a key-sorted map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub witness: String,
    pub ms: f64,
}

impl Report {
    pub fn new(check: impl Into<String>, params: Map<String, Value>, status: Status, witness: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            params,
            status,
            witness: witness.into(),
            ms: 0.0,
        }
    }

    /// `ok` with an empty witness, or `fail` with `witness`.
    pub fn verdict(check: impl Into<String>, params: Map<String, Value>, witness: Option<String>) -> Self {
        match witness {
            None => Self::new(check, params, Status::Ok, ""),
            Some(w) => Self::new(check, params, Status::Fail, w),
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
        self
    }

    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }
}

/// Builds a params map from `(key, value)` pairs.
pub fn params<I, K, V>(pairs: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: Into<Value>,
{
    pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect()
}

fn cmp_values(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(0.0), y.as_f64().unwrap_or(0.0));
            x.total_cmp(&y)
        }
        (Value::Array(x), Value::Array(y)) => {
            for (u, v) in x.iter().zip(y) {
                let o = cmp_values(u, v);
                if o != Ordering::Equal {
                    return o;
                }
            }
            x.len().cmp(&y.len())
        }
        _ => a.to_string().cmp(&b.to_string()),
    }
}

fn cmp_params(a: &Map<String, Value>, b: &Map<String, Value>) -> Ordering {
    for ((ka, va), (kb, vb)) in a.iter().zip(b) {
        let o = ka.cmp(kb).then_with(|| cmp_values(va, vb));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Sorts by `(check, params)`, comparing numbers numerically.
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by(|a, b| a.check.cmp(&b.check).then_with(|| cmp_params(&a.params, &b.params)));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders reports as a JSON array, or as one line per report followed by
/// an optional `witness:` line and a summary.
pub fn emit_report(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            let width = reports.iter().map(|r| r.check.len()).max().unwrap_or(0);
            for r in reports {
                let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect();
                let _ = writeln!(
                    out,
                    "{:<11} {:<width$}  {}  ({:.3} ms)",
                    r.status.as_str(),
                    r.check,
                    ps.join(" "),
                    r.ms
                );
                if !r.witness.is_empty() {
                    let _ = writeln!(out, "    witness: {}", r.witness);
                }
            }
            let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
            let _ = writeln!(
                out,
                "{} checks: {} ok, {} fail, {} param-error",
                reports.len(),
                count(Status::Ok),
                count(Status::Fail),
                count(Status::ParamError)
            );
            out
        }
    }
}

/// Process exit code: 0 iff every report is `ok`.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().all(Report::is_ok) {
        0
    } else {
        1
    }
}
