use std::collections::BTreeMap;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Provenance block embedded in every report. Holds no timestamps, so the
/// same invocation on the same inputs yields the same bytes.
#[derive(Debug, Default)]
pub struct RunManifest {
    command: String,
    inputs: BTreeMap<String, Value>,
    params: BTreeMap<String, Value>,
    seeds: Vec<u64>,
    space: Option<Value>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            ..Default::default()
        }
    }

    /// Records an input file by path and content hash.
    pub fn input(&mut self, name: &str, path: &str, contents: &str) -> &mut Self {
        self.inputs.insert(
            name.to_string(),
            json!({"path": path, "sha256": sha256_hex(contents.as_bytes())}),
        );
        self
    }

    pub fn param(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    /// Generator provenance (the `meta` field of a generated space); a
    /// generator seed is also listed under `seeds`.
    pub fn space(&mut self, meta: Option<&Value>) -> &mut Self {
        if let Some(seed) = meta.and_then(|m| m.get("seed")).and_then(Value::as_u64) {
            self.seeds.push(seed);
        }
        self.space = meta.cloned();
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "tool": format!("lipfree {}", env!("CARGO_PKG_VERSION")),
            "inputs": self.inputs,
            "params": self.params,
            "seeds": self.seeds,
            "space": self.space,
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
