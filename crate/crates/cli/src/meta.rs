use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything needed to rerun a command and get the same output bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub command: String,
    /// Canonical argument vector with every default made explicit.
    pub argv: Vec<String>,
    pub params: Value,
    pub root_seed: u64,
    pub budgets: Value,
    pub outcome: String,
    pub detail: Value,
    pub outputs: Vec<PathBuf>,
    /// Not reproducible; ignored by `replay`.
    pub wall_time_ms: u128,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

impl RunMetadata {
    pub fn write(&self, out: &Path) -> std::io::Result<PathBuf> {
        let path = sidecar_path(out);
        let text = serde_json::to_string_pretty(self).expect("metadata serializes") + "\n";
        std::fs::write(&path, text)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
