use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::write_atomic;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to re-run a command and check its outputs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    /// Effective seeds, including ones derived from the master seed.
    pub seeds: BTreeMap<String, u64>,
    pub seed_scheme: String,
    pub rng_algorithm: String,
    pub version: String,
    pub duration_secs: f64,
    pub outputs: Vec<String>,
}

pub const SEED_SCHEME: &str = "derive(b, i) = splitmix64(splitmix64(b) ^ i * 0xD1B54A32D192ED03); \
design = derive(seed, 0); noise base = derive(seed, 1); replicate r = derive(base, r)";

impl RunManifest {
    pub fn new<P: Serialize>(command: &str, params: &P) -> Result<Self, CliError> {
        Ok(Self {
            command: command.into(),
            params: serde_json::to_value(params)?,
            seeds: BTreeMap::new(),
            seed_scheme: SEED_SCHEME.into(),
            rng_algorithm: boostdf::RNG_ALGORITHM.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            duration_secs: 0.0,
            outputs: Vec::new(),
        })
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.into(), value);
    }

    pub fn output(&mut self, path: &Path) {
        if let Some(name) = path.file_name() {
            self.outputs.push(name.to_string_lossy().into_owned());
        }
    }

    pub fn save(mut self, dir: &Path, elapsed: Duration) -> Result<(), CliError> {
        self.duration_secs = elapsed.as_secs_f64();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}
