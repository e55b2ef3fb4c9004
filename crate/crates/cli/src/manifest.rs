use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cache::{sha256_hex, write_atomic};

/// Sidecar describing how an output file was produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tool_version: String,
    pub digits: u32,
    pub wall_time_seconds: f64,
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, digits: u32) -> Self {
        Self {
            command: command.to_owned(),
            parameters,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            digits,
            wall_time_seconds: 0.0,
            output_sha256: String::new(),
        }
    }

    pub fn sidecar_path(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    /// Writes `bytes` to `output` and the manifest next to it.
    pub fn write_with(mut self, output: &Path, bytes: &[u8], wall_time_seconds: f64) -> std::io::Result<()> {
        self.wall_time_seconds = wall_time_seconds;
        self.output_sha256 = sha256_hex(bytes);
        write_atomic(output, bytes)?;
        let mut doc = serde_json::to_vec_pretty(&self).expect("manifest serializes");
        doc.push(b'\n');
        write_atomic(&Self::sidecar_path(output), &doc)
    }
}
