use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Parameters,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub version: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub steps: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mmax_effective: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_ring: Option<f64>,
    pub threads: usize,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> std::io::Result<RunManifest> {
        Self::read_str(&std::fs::read_to_string(path)?)
    }

    pub fn read_str(text: &str) -> std::io::Result<RunManifest> {
        serde_json::from_str(text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
