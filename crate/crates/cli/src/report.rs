//! Run reports: one JSON document per invocation.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL_VERSION: &str = concat!("helly ", env!("CARGO_PKG_VERSION"));

/// Everything except `timing` is a function of the input and the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    /// SHA-256 over the length-prefixed input parts, hex encoded.
    pub input_digest: String,
    pub parameters: Value,
    pub input: Value,
    pub result: Value,
    pub timing: Timing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A report under construction, before timing is attached.
pub struct Draft {
    pub command: &'static str,
    pub digest: String,
    pub parameters: Value,
    pub input: Value,
    pub result: Value,
    pub exit: u8,
}

impl Draft {
    pub fn finish(self, elapsed_ms: u64) -> (RunReport, u8) {
        let report = RunReport {
            command: self.command.into(),
            tool_version: TOOL_VERSION.into(),
            input_digest: self.digest,
            parameters: self.parameters,
            input: self.input,
            result: self.result,
            timing: Timing { elapsed_ms },
        };
        (report, self.exit)
    }
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}
