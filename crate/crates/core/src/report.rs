//! Machine-readable outcome of a single verification check.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    GateFailed,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub case: String,
    pub params: Value,
    pub status: Status,
    pub witnesses: Vec<Value>,
    pub timings_ms: f64,
}

impl Report {
    pub fn new(check: impl Into<String>, case: impl Into<String>, params: Value) -> Self {
        Self {
            check: check.into(),
            case: case.into(),
            params,
            status: Status::Pass,
            witnesses: Vec::new(),
            timings_ms: 0.0,
        }
    }

    pub fn gate_failed(check: impl Into<String>, case: impl Into<String>, params: Value, reason: impl Into<String>) -> Self {
        let mut r = Self::new(check, case, params);
        r.status = Status::GateFailed;
        r.witnesses.push(serde_json::json!({ "reason": reason.into() }));
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records a counterexample and marks the report failed.
    pub fn fail_with(&mut self, witness: Value) {
        self.status = Status::Fail;
        self.witnesses.push(witness);
    }

    /// Records a non-failing observation.
    pub fn note(&mut self, witness: Value) {
        self.witnesses.push(witness);
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timings_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// One line: `check case status` plus the witness count.
    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::GateFailed => "gate_failed",
        };
        format!(
            "{:<28} {:<8} {:<12} witnesses={} ({:.1} ms)",
            self.check,
            self.case,
            status,
            self.witnesses.len(),
            self.timings_ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_key_order_and_round_trip() {
        let mut r = Report::new("span", "case2", serde_json::json!({"q": 5}));
        r.fail_with(serde_json::json!({"n": 1}));
        let text = serde_json::to_string(&r).unwrap();
        let keys = ["\"check\"", "\"case\"", "\"params\"", "\"status\"", "\"witnesses\"", "\"timings_ms\""];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(text.contains("\"fail\""));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        let g = Report::gate_failed("x", "case1", Value::Null, "q <= 3");
        assert_eq!(serde_json::to_value(g.status).unwrap(), "gate_failed");
    }
}
