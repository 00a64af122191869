use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn new(path: &Path, text: &str) -> Self {
        Input {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        }
    }
}

/// The JSON envelope shared by every command. Keys serialize in sorted
/// order, so equal inputs give byte-identical output.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<Input>,
    pub params: Value,
    pub ok: bool,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, input: Input, params: Value, ok: bool, result: Value) -> Self {
        Report {
            schema: SCHEMA,
            tool: "qposet",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: vec![input],
            params,
            ok,
            result,
        }
    }

    pub fn to_pretty(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable report");
        serde_json::to_string_pretty(&v).expect("serializable report") + "\n"
    }
}
