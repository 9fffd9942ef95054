//! Machine-readable verification reports.
//!
//! Floats are rounded to twelve significant digits before serialization so
//! reruns with the same seed produce byte-identical JSON.

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::qalgebra::{Params, ParamsSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// Whether a residual was computed in exact or floating-point arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Float,
}

pub fn fixed(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn ser_fixed<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    let v = fixed(*x);
    if v.is_finite() {
        s.serialize_f64(v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

/// Rounds every float inside a JSON value with [`fixed`].
pub fn fix_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(fixed(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(fix_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, fix_floats(v))).collect())
        }
        other => other,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub params: ParamsSummary,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<u32>,
    pub status: Status,
    #[serde(serialize_with = "ser_fixed")]
    pub max_residual: f64,
    #[serde(serialize_with = "ser_fixed")]
    pub tolerance: f64,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    /// Suite-specific rows: every residual that went into `max_residual`.
    pub details: Value,
}

impl Report {
    pub fn new(check: &str, params: &Params) -> Self {
        Report {
            check: check.to_string(),
            params: params.summary(),
            n: None,
            k: None,
            status: Status::Pass,
            max_residual: 0.0,
            tolerance: 0.0,
            provenance: Provenance::Exact,
            seed: None,
            details: Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        let v = fix_floats(serde_json::to_value(self).expect("report serializes"));
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounds_to_twelve_digits() {
        assert_eq!(fixed(0.1 + 0.2), 0.3);
        assert_eq!(fixed(0.0), 0.0);
        assert!(fixed(f64::NAN).is_nan());
    }

    #[test]
    fn nested_floats_are_rounded() {
        let v = serde_json::json!({"a": [0.1 + 0.2, 1], "b": {"c": 1.0 / 3.0}});
        let out = fix_floats(v);
        assert_eq!(out["a"][0], serde_json::json!(0.3));
        assert_eq!(out["b"]["c"], serde_json::json!(0.333333333333));
    }
}
