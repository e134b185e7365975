//! Line-JSON checkpoints, written atomically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::report::write_atomic;

use super::{ScanConfig, ScanReport, Shard};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize)]
struct HashedConfig {
    version: u32,
    p: u32,
    n: usize,
    canonicalize: bool,
    cross_check_full: bool,
    shard: Shard,
}

/// SHA-256 over the settings that determine the scan's output. Worker
/// count, time caps and the checkpoint path are excluded.
pub fn config_hash(cfg: &ScanConfig) -> String {
    let h = HashedConfig {
        version: CHECKPOINT_VERSION,
        p: cfg.p,
        n: cfg.n,
        canonicalize: cfg.canonicalize,
        cross_check_full: cfg.cross_check_full,
        shard: cfg.shard,
    };
    let bytes = serde_json::to_vec(&h).expect("plain struct");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config_hash: String,
    /// Every enumeration counter below this one has been processed.
    pub next_counter: u64,
    pub finished: bool,
    pub report: ScanReport,
}

impl Checkpoint {
    pub fn new(config_hash: &str, next_counter: u64, finished: bool, report: ScanReport) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            config_hash: config_hash.to_string(),
            next_counter,
            finished,
            report,
        }
    }

    /// `Ok(None)` when there is no file yet.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Checkpoint(format!("{} is empty", path.display())))?;
        serde_json::from_str(line)
            .map(Some)
            .map_err(|e| Error::Checkpoint(format!("{} is corrupt: {e}", path.display())))
    }

    pub fn verify(&self, expected_hash: &str) -> Result<()> {
        if self.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version {} is not supported (expected {CHECKPOINT_VERSION})",
                self.version
            )));
        }
        if self.config_hash != expected_hash {
            return Err(Error::Checkpoint(
                "configuration hash differs from the current scan".into(),
            ));
        }
        Ok(())
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let mut line = serde_json::to_vec(self)?;
        line.push(b'\n');
        write_atomic(path, &line)
    }
}
