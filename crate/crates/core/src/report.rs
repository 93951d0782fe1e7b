//! Structured pass/fail records.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::coefficients::ExactScalar;

/// Schema version written into every report file.
pub const REPORT_SCHEMA: u32 = 1;

/// A named exact value, or an oracle estimate with its uncertainty.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ReportValue {
    Exact {
        name: String,
        value: ExactScalar,
    },
    Oracle {
        name: String,
        value: f64,
        uncertainty: f64,
    },
    Text {
        name: String,
        text: String,
    },
}

impl ReportValue {
    pub fn exact(name: impl Into<String>, value: ExactScalar) -> Self {
        Self::Exact {
            name: name.into(),
            value,
        }
    }

    pub fn oracle(name: impl Into<String>, value: f64, uncertainty: f64) -> Self {
        Self::Oracle {
            name: name.into(),
            value,
            uncertainty,
        }
    }

    pub fn text(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self::Text {
            name: name.into(),
            text: text.into(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Exact { name, .. } | Self::Oracle { name, .. } | Self::Text { name, .. } => name,
        }
    }

    pub fn exact_value(&self) -> Option<&ExactScalar> {
        match self {
            Self::Exact { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub statement: String,
    pub anchors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs_digest: String,
    pub values: Vec<ReportValue>,
    pub relation: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(statement: impl Into<String>, relation: impl Into<String>) -> Self {
        Self {
            statement: statement.into(),
            anchors: Vec::new(),
            seed: None,
            inputs_digest: digest(b""),
            values: Vec::new(),
            relation: relation.into(),
            pass: true,
            runtime_ms: None,
        }
    }

    pub fn anchor(mut self, a: impl Into<String>) -> Self {
        self.anchors.push(a.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Records a digest of the canonical JSON form of the inputs.
    pub fn inputs<T: Serialize>(mut self, inputs: &T) -> Self {
        let bytes = serde_json::to_vec(inputs).unwrap_or_default();
        self.inputs_digest = digest(&bytes);
        self
    }

    pub fn value(mut self, v: ReportValue) -> Self {
        self.values.push(v);
        self
    }

    /// Adds a check; the report passes only if every check does.
    pub fn check(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }
}

/// Hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_accumulate() {
        let r = VerificationReport::new("s", "x = 0").check(true).check(false).check(true);
        assert!(!r.pass);
    }

    #[test]
    fn json_is_stable() {
        let r = VerificationReport::new("s", "x = 0")
            .anchor("a")
            .seed(7)
            .inputs(&[1, 2, 3])
            .value(ReportValue::exact("x", ExactScalar::zero()));
        let a = serde_json::to_string(&r).unwrap();
        let b = serde_json::to_string(&r.clone()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("runtime_ms"));
        assert_eq!(r.inputs_digest.len(), 64);
    }
}
