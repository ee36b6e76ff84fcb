//! JSON conventions shared by every external interface: integers travel as
//! decimal strings, objects use sorted keys.

use num_bigint::BigInt;
use serde_json::Value;

use crate::error::{Error, Result};

pub fn integer(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn integers(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(integer).collect())
}

pub fn parse_integer(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("`{s}` is not a decimal integer"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n
            .to_string()
            .parse()
            .expect("serde_json integer renders as decimal")),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

pub fn integer_vec(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array of integers, found {v}")))?
        .iter()
        .map(parse_integer)
        .collect()
}

/// Canonical rendering used for all JSON output. Keys come out sorted because
/// `serde_json::Map` is ordered, so parse-then-render is the identity.
pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn integers_round_trip_through_strings() {
        let big: BigInt = "-98765432109876543210".parse().unwrap();
        assert_eq!(parse_integer(&integer(&big)).unwrap(), big);
        assert_eq!(parse_integer(&json!(17)).unwrap(), BigInt::from(17));
        assert!(parse_integer(&json!(1.5)).is_err());
        assert!(parse_integer(&json!("12a")).is_err());
    }

    #[test]
    fn render_sorts_keys() {
        let v = json!({"b": "1", "a": ["2"]});
        let s = render(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        let again: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(render(&again), s);
    }
}
