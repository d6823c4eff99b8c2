//! `--config` files: JSON or TOML objects whose keys mirror the long flags
//! (with `_` in place of `-`). Flags given on the command line win.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,

    pub p: Option<f64>,
    pub streaming: Option<bool>,
    pub matrix_out: Option<PathBuf>,

    pub alpha: Option<f64>,
    pub m: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub weights: Option<String>,
    pub vectorize: Option<String>,
    pub label_p: Option<f64>,
    pub merge_p: Option<f64>,
    pub emit_memberships: Option<bool>,

    pub clusters: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub per_pair: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let is_json = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => true,
            Some("toml") => false,
            _ => text.trim_start().starts_with('{'),
        };
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}
