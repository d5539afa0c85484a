//! Machine-readable command results with deterministic key order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

/// One command's output. Keys serialize sorted at every level.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub values: BTreeMap<String, Value>,
    pub diagnostics: BTreeMap<String, Value>,
    pub parameters: BTreeMap<String, Value>,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.values.insert(key.into(), v.into());
        self
    }

    pub fn diagnostic(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.diagnostics.insert(key.into(), v.into());
        self
    }

    pub fn parameter(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.into(), v.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&sorted(serde_json::to_value(self).expect("plain data")))
                .expect("plain data");
        s.push('\n');
        s
    }
}

// serde_json's `preserve_order` feature can be switched on by any crate in the
// build, which would make `Map` keep insertion order.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let b: BTreeMap<String, Value> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(b.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// Entropy-valued outputs are stored in nats and converted only here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Nats,
    Bits,
}

impl LogBase {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}
