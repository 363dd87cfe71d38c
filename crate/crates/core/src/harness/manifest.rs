use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

/// Content hash of the canonical config text.
pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(cfg.emit().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberStatus {
    pub eps: f64,
    pub status: String,
    pub steps: usize,
    pub dt: f64,
    pub message: String,
}

/// Version of every CSV/JSON layout written by the harness.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub kind: String,
    pub hash: String,
    pub seed: u64,
    pub config: Vec<(String, String)>,
    pub members: Vec<MemberStatus>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(cfg: &RunConfig) -> Self {
        let config = cfg
            .emit()
            .lines()
            .filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.to_string(), v.to_string())))
            .collect();
        Manifest {
            schema_version: SCHEMA_VERSION,
            kind: cfg.experiment.clone(),
            hash: config_hash(cfg),
            seed: cfg.seed,
            config,
            members: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
