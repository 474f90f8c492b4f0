use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One pass/fail judgement with the items that explain a failure.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub items: Vec<Value>,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, items: Vec<Value>) -> Self {
        Verdict {
            name: name.to_string(),
            passed,
            items,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
    pub payload: Value,
}

impl Report {
    pub fn new(
        command: &str,
        input: &[u8],
        seed: u64,
        verdicts: Vec<Verdict>,
        payload: Value,
    ) -> Self {
        Report {
            command: command.to_string(),
            input_digest: digest(input),
            seed,
            passed: verdicts.iter().all(|v| v.passed),
            verdicts,
            payload,
        }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_canonical_json(&self) -> String {
        // `Value` objects are BTreeMaps, so a round trip through them sorts keys.
        let value = serde_json::to_value(self).expect("reports are plain data");
        let mut text = serde_json::to_string_pretty(&value).expect("reports are plain data");
        text.push('\n');
        text
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}
