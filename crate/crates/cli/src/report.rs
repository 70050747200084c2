use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use comply_core::logrel::CheckBudget;

/// The deterministic record of one command. Wall time is reported on
/// stderr so that identical runs produce identical reports.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<CheckBudget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: &[&[u8]]) -> RunReport {
        RunReport {
            command,
            inputs_sha256: digest(inputs),
            budget: None,
            seed: None,
            result: Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// SHA-256 over the inputs, each prefixed by its length.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert_eq!(digest(&[b"x"]), digest(&[b"x"]));
        assert_eq!(digest(&[]).len(), 64);
    }

    #[test]
    fn report_omits_absent_fields() {
        let r = RunReport::new(vec!["run".into()], &[b"{}"]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert!(v.get("budget").is_none());
        assert!(v.get("seed").is_none());
        assert_eq!(v["command"][0], "run");
    }
}
