//! Canonical JSON reports.
//!
//! Keys are sorted, numbers are integers, and rationals are `{num, den}`
//! objects, so identical inputs produce identical bytes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use dimkit::Rational;

/// Running digest over everything a command reads.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        InputDigest(h)
    }

    fn field(&mut self, tag: &str, bytes: &[u8]) {
        self.0.update((tag.len() as u64).to_le_bytes());
        self.0.update(tag.as_bytes());
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }

    pub fn arg(&mut self, name: &str, value: impl std::fmt::Display) {
        self.field(&format!("arg:{name}"), value.to_string().as_bytes());
    }

    pub fn file(&mut self, name: &str, contents: &[u8]) {
        self.field(&format!("file:{name}"), contents);
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

pub struct Report {
    pub command: String,
    pub digest: String,
    pub result: Value,
    pub certificates: Vec<Value>,
    pub warnings: Vec<String>,
    pub runtime_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, digest: InputDigest, result: Value) -> Self {
        Report {
            command: command.into(),
            digest: digest.finish(),
            result,
            certificates: Vec::new(),
            warnings: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn with_certificates(mut self, certificates: Vec<Value>) -> Self {
        self.certificates = certificates;
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs_digest".into(), json!(self.digest));
        m.insert("result".into(), self.result.clone());
        m.insert("certificates".into(), Value::Array(self.certificates.clone()));
        m.insert("warnings".into(), json!(self.warnings));
        m.insert("runtime_ms".into(), self.runtime_ms.map_or(Value::Null, |t| json!(t as u64)));
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Integer as a JSON number when it fits in 64 bits, else a decimal string.
pub fn big_int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn rational(r: &Rational) -> Value {
    json!({ "num": big_int(r.numer()), "den": big_int(r.denom()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_integer_pairs() {
        let r = Rational::new(BigInt::from(2), BigInt::from(8));
        assert_eq!(rational(&r), json!({"num": 1, "den": 4}));
        let huge = Rational::from_integer(BigInt::from(u64::MAX) * 4);
        assert_eq!(rational(&huge)["num"], json!("73786976294838206460"));
    }

    #[test]
    fn digest_separates_fields() {
        let mut a = InputDigest::new("dim");
        a.arg("x", "ab");
        a.arg("y", "c");
        let mut b = InputDigest::new("dim");
        b.arg("x", "a");
        b.arg("y", "bc");
        assert_ne!(a.finish(), b.finish());
    }

    #[test]
    fn keys_are_sorted() {
        let r = Report::new("dim", InputDigest::new("dim"), json!({"z": 1, "a": 2}));
        let text = r.render();
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"certificates\"") < pos("\"command\""));
        assert!(pos("\"a\"") < pos("\"z\""));
        assert!(text.contains("\"runtime_ms\": null"));
    }
}
