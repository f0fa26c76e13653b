//! Content-addressed result cache.
//!
//! The key is the SHA-256 of a canonical text rendering of every input that
//! determines the numbers: model couplings, sector, basis order, μ choice
//! (fixed value or scan range — a scan is deterministic, so the range is a
//! valid key), radial/angular resolution, working precision, and whether
//! the run computes entropy. One JSON record per file; writes go through a
//! temp file + rename so a concurrent reader never sees a torn record.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::ResolvedRun;
use crate::record::RunRecord;

/// What the run computes; an energy-only record must not shadow an entropy
/// record or vice versa.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    Energy,
    Entropy,
}

impl RunKind {
    fn as_str(self) -> &'static str {
        match self {
            RunKind::Energy => "energy",
            RunKind::Entropy => "entropy",
        }
    }
}

/// Canonical key text for one (config, γ, kind) request.
pub fn key_text(cfg: &ResolvedRun, gamma: f64, kind: RunKind) -> String {
    // γ is keyed per point: sweep points share the rest of the config.
    format!(
        "v1|kind={}|mode={}|eta={}|gamma={}|state={}|sz={}|omega={}|mu={}|R={}|nmax={}|lmax={}|Q={}|precision={}",
        kind.as_str(),
        cfg.mode.as_str(),
        cfg.eta,
        gamma,
        cfg.state.as_str(),
        cfg.sz,
        cfg.omega,
        cfg.mu.key_text(),
        cfg.r_cut.key_text(),
        cfg.nmax,
        cfg.lmax,
        cfg.quad,
        cfg.precision,
    )
}

fn key_hash(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

pub fn record_path(dir: &Path, cfg: &ResolvedRun, gamma: f64, kind: RunKind) -> PathBuf {
    dir.join(format!("{}.json", key_hash(&key_text(cfg, gamma, kind))))
}

/// Look up a cached record. Any unreadable or unparsable file is treated
/// as a miss (the cache is disposable by design).
pub fn load(dir: &Path, cfg: &ResolvedRun, gamma: f64, kind: RunKind) -> Option<RunRecord> {
    let path = record_path(dir, cfg, gamma, kind);
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// Store a record atomically (write temp, then rename into place).
pub fn store(
    dir: &Path,
    cfg: &ResolvedRun,
    gamma: f64,
    kind: RunKind,
    record: &RunRecord,
) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = record_path(dir, cfg, gamma, kind);
    let tmp = dir.join(format!(
        ".tmp-{}-{}",
        std::process::id(),
        path.file_name().unwrap().to_string_lossy()
    ));
    let mut text = serde_json::to_string_pretty(record).expect("record serializes");
    text.push('\n');
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}
