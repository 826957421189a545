//! JSON report envelope shared by every CLI command.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIG_DIGITS: usize = 15;

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON tree; non-finite values become `null`.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub artifact_version: &'static str,
}

impl Header {
    pub fn new(command: &str, args: BTreeMap<String, String>, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            args,
            seed,
            artifact_version: ARTIFACT_VERSION,
        }
    }
}

/// Header fields followed by `result`, pretty-printed with rounded floats.
pub fn render<T: Serialize>(header: &Header, result: &T) -> serde_json::Result<String> {
    let mut obj = match serde_json::to_value(header)? {
        Value::Object(o) => o,
        _ => Map::new(),
    };
    obj.insert("result".into(), round_value(serde_json::to_value(result)?));
    serde_json::to_string_pretty(&Value::Object(obj))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333333);
        assert_eq!(round_sig(-2.5e-300), -2.5e-300);
        let v = round_value(serde_json::json!({"a": [1.0000000000000002, 3], "b": "x"}));
        assert_eq!(v, serde_json::json!({"a": [1.0, 3], "b": "x"}));
    }

    #[test]
    fn header_first() {
        let h = Header::new("bounds", BTreeMap::from([("c".into(), "1.5".into())]), None);
        let s = render(&h, &vec![f64::NAN, 1.0]).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["command"], "bounds");
        assert_eq!(v["artifact_version"], ARTIFACT_VERSION);
        assert_eq!(v["result"], serde_json::json!([null, 1.0]));
    }
}
