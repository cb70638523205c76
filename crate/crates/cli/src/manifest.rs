//! Run manifests and atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, replayed verbatim.
    pub args: Vec<String>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// SHA-256 of every input file, keyed by path as given.
    pub input_digests: Vec<(String, String)>,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        args: &[String],
        params: serde_json::Value,
        seed: Option<u64>,
        inputs: &[&Path],
        duration: Duration,
    ) -> std::io::Result<Self> {
        let mut input_digests = Vec::new();
        for path in inputs {
            if path.exists() {
                input_digests.push((path.display().to_string(), file_digest(path)?));
            }
        }
        Ok(Self {
            subcommand: subcommand.to_string(),
            args: args.to_vec(),
            params,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests,
            duration_secs: duration.as_secs_f64(),
        })
    }
}

pub fn file_digest(path: &Path) -> std::io::Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `dir/name.json` -> `dir/name.<tag>.json`.
pub fn sidecar(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}.json"))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
