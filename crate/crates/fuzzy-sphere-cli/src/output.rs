//! File emission: atomic writes, checksums and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use fuzzy_sphere::io::GridSpec;

/// Write `contents` to `path` via a temp file + rename in the same
/// directory, so interrupted runs never leave a truncated artifact.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

pub fn sha256_hex(contents: &str) -> String {
    let digest = Sha256::digest(contents.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One emitted file, as recorded in the manifest.
#[derive(Debug, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

/// Reproducibility record written next to the curve files. Contains the
/// full input configuration and a checksum per output; deliberately no
/// timestamps or absolute paths, so identical runs produce identical
/// manifests.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub n_list: Vec<u32>,
    pub n_max: u32,
    pub radius: f64,
    pub include_zero_modes: bool,
    pub normalize_area: bool,
    pub format: String,
    pub grid: GridSpec,
    pub outputs: Vec<OutputEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}
