use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Provenance attached to every experiment output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub artifact_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new<P: Serialize>(subcommand: &str, params: &P, seed: u64) -> Self {
        let parameters = match serde_json::to_value(params) {
            Ok(Value::Object(map)) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        Self {
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    /// `<output>.manifest.json`, written next to a data file whose format
    /// has no room for it.
    pub fn sidecar_path(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write_sidecar(&self, output: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(Self::sidecar_path(output), text + "\n")
    }
}
