//! Versioned JSON reports emitted by the certificate operations.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::presentations::{Presentation, WordOracle};
use crate::scalar::{Extended, Rational, Scalar};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One checked statement; `expected` and `got` are rendered values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub kind: String,
    /// SHA-256 of the canonical presentation text; empty when the run has no
    /// presentation.
    pub presentation_sha: String,
    pub oracle: Option<String>,
    pub radius: Option<usize>,
    /// Rational `p/q`, `inf`, or absent.
    pub value: Option<String>,
    pub witness_chain: Option<Value>,
    pub primitive: Option<Value>,
    pub assertions: Vec<Assertion>,
    pub details: Map<String, Value>,
}

impl CertificateReport {
    pub fn new(kind: &str) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            kind: kind.to_string(),
            presentation_sha: String::new(),
            oracle: None,
            radius: None,
            value: None,
            witness_chain: None,
            primitive: None,
            assertions: Vec::new(),
            details: Map::new(),
        }
    }

    pub fn with_presentation(mut self, p: &Presentation) -> Self {
        self.presentation_sha = p.content_hash();
        self
    }

    /// For inputs hashed elsewhere, such as relative presentations.
    pub fn with_sha(mut self, sha: String) -> Self {
        self.presentation_sha = sha;
        self
    }

    pub fn with_oracle(mut self, oracle: WordOracle) -> Self {
        self.oracle = Some(oracle.to_string());
        self
    }

    pub fn with_radius(mut self, radius: Option<usize>) -> Self {
        self.radius = radius;
        self
    }

    pub fn set_value(&mut self, v: &Extended<Rational>) {
        self.value = Some(v.render());
    }

    pub fn detail(&mut self, key: &str, v: impl Into<Value>) {
        self.details.insert(key.to_string(), v.into());
    }

    pub fn check(&mut self, name: &str, expected: impl ToString, got: impl ToString, pass: bool) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            expected: expected.to_string(),
            got: got.to_string(),
            pass,
        });
    }

    pub fn check_eq(&mut self, name: &str, expected: &Rational, got: &Rational) {
        self.check(name, expected.render(), got.render(), expected == got);
    }

    /// Passes when `got ≥ bound`.
    pub fn check_at_least(&mut self, name: &str, bound: &Rational, got: &Extended<Rational>) {
        let pass = Extended::Finite(bound.clone()).le(got);
        self.check(name, format!(">= {}", bound.render()), got.render(), pass);
    }

    /// Passes when `got ≤ bound`.
    pub fn check_at_most(&mut self, name: &str, bound: &Rational, got: &Extended<Rational>) {
        let pass = got.le(&Extended::Finite(bound.clone()));
        self.check(name, format!("<= {}", bound.render()), got.render(), pass);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering of the same content.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} (schema {}, tool {})\n", self.kind, self.schema_version, self.tool_version));
        if !self.presentation_sha.is_empty() {
            out.push_str(&format!("presentation: {}\n", self.presentation_sha));
        }
        if let Some(o) = &self.oracle {
            out.push_str(&format!("oracle: {o}\n"));
        }
        if let Some(r) = self.radius {
            out.push_str(&format!("radius: {r}\n"));
        }
        if let Some(v) = &self.value {
            out.push_str(&format!("value: {v}\n"));
        }
        for a in &self.assertions {
            let mark = if a.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {}: expected {}, got {}\n", a.name, a.expected, a.got));
        }
        for (k, v) in &self.details {
            out.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(c) = &self.witness_chain {
            out.push_str(&format!("witness_chain: {c}\n"));
        }
        if let Some(p) = &self.primitive {
            out.push_str(&format!("primitive: {p}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn json_round_trip_and_text() {
        let p = crate::presentations::parse_presentation("gens: a").unwrap();
        let mut r = CertificateReport::new("iso")
            .with_presentation(&p)
            .with_oracle(WordOracle::FreeReduction)
            .with_radius(Some(3));
        r.set_value(&Extended::Finite(q(3, 4)));
        r.check_eq("beta", &qi(9), &qi(9));
        r.check_at_least("lower", &q(3, 4), &Extended::PosInfinity);
        r.check_at_most("upper", &qi(1), &Extended::PosInfinity);
        assert!(!r.passed());
        let back = CertificateReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let text = r.to_text();
        assert!(text.contains("value: 3/4"));
        assert!(text.contains("[FAIL] upper: expected <= 1/1, got inf"));
    }
}
