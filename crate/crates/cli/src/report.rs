//! Canonical JSON reports.
//!
//! Keys are emitted in sorted order and every rational appears as a
//! lowest-terms `"p/q"` string next to a 12-significant-digit decimal, so two
//! runs on the same inputs produce identical bytes.

use serde_json::{json, Map, Value};
use toric_core::rational::{format_decimal, format_q};
use toric_core::{RaySet, TWeilDivisor, Q};

pub const DECIMAL_DIGITS: usize = 12;

pub fn q(x: &Q) -> Value {
    Value::String(format_q(x))
}

pub fn decimal(x: &Q) -> Value {
    Value::String(format_decimal(x, DECIMAL_DIGITS))
}

pub fn qs(xs: &[Q]) -> Value {
    xs.iter().map(q).collect()
}

pub fn decimals(xs: &[Q]) -> Value {
    xs.iter().map(decimal).collect()
}

/// Inserts `key` as `"p/q"` and `key_decimal` as its decimal.
pub fn put_q(out: &mut Map<String, Value>, key: &str, x: &Q) {
    out.insert(key.to_string(), q(x));
    out.insert(format!("{key}_decimal"), decimal(x));
}

pub fn put_qs(out: &mut Map<String, Value>, key: &str, xs: &[Q]) {
    out.insert(key.to_string(), qs(xs));
    out.insert(format!("{key}_decimal"), decimals(xs));
}

pub fn counts(xs: &[usize]) -> Value {
    xs.iter().map(|x| Value::String(x.to_string())).collect()
}

pub fn rays(s: RaySet) -> Value {
    json!(s.to_vec())
}

pub fn cones(cs: &[RaySet]) -> Value {
    cs.iter().map(|&c| rays(c)).collect()
}

pub fn divisor(d: &TWeilDivisor) -> Value {
    qs(d.coeffs())
}

/// Pretty JSON with a trailing newline.
pub fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report is valid JSON");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_core::rational::{frac, q as rq};

    #[test]
    fn rational_forms() {
        assert_eq!(q(&rq(12)), json!("12"));
        assert_eq!(decimal(&rq(12)), json!("12.0000000000"));
        assert_eq!(q(&frac(1, 3)), json!("1/3"));
        assert_eq!(decimal(&frac(1, 3)), json!("0.333333333333"));
        assert_eq!(q(&frac(-4, 6)), json!("-2/3"));
    }

    #[test]
    fn paired_keys() {
        let mut m = Map::new();
        put_qs(&mut m, "hhat", &[rq(9), rq(0)]);
        assert_eq!(m["hhat"], json!(["9", "0"]));
        assert_eq!(m["hhat_decimal"], json!(["9.00000000000", "0.00000000000"]));
    }
}
