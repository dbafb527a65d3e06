use std::collections::BTreeMap;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Provenance of one invocation. Only `wall_clock_ms` varies between
/// identical runs.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub subcommand: String,
    pub p: Option<u64>,
    pub e: Option<u32>,
    /// Input name to digest of its canonical form.
    pub input_digests: BTreeMap<String, String>,
    pub wall_clock_ms: u128,
    pub exit_code: u8,
    pub result_digest: String,
}

impl RunManifest {
    pub fn to_json(&self) -> Value {
        json!({
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "p": self.p,
            "e": self.e,
            "input_digests": self.input_digests,
            "wall_clock_ms": self.wall_clock_ms as u64,
            "exit_code": self.exit_code,
            "result_digest": self.result_digest,
        })
    }
}
