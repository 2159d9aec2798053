//! Verdict cache: one JSON object per line, appended after each fresh
//! classification.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::caps::Caps;
use crate::perfect::{CertificateRecord, ClassifyReport, Interpretation, Policy};

pub const CACHE_ENV: &str = "SUBCODES_CACHE";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub generators: Vec<String>,
    pub policy: Policy,
    pub interpretation: Interpretation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub tool_version: String,
    pub caps: Caps,
    pub certificate_digest: Option<String>,
    pub report: ClassifyReport,
}

pub fn certificate_digest(c: &CertificateRecord) -> String {
    let bytes = serde_json::to_vec(c).expect("certificate serialises");
    hex::encode(Sha256::digest(bytes))
}

impl CacheEntry {
    pub fn new(key: CacheKey, caps: Caps, report: ClassifyReport) -> Self {
        CacheEntry {
            key,
            tool_version: TOOL_VERSION.to_string(),
            caps,
            certificate_digest: report.certificate.as_ref().map(certificate_digest),
            report,
        }
    }

    /// Served only for the same key, tool version and caps, and only when
    /// the stored certificate still matches its digest.
    fn serves(&self, key: &CacheKey, caps: &Caps) -> bool {
        self.key == *key
            && self.tool_version == TOOL_VERSION
            && self.caps == *caps
            && self.report.certificate.as_ref().map(certificate_digest) == self.certificate_digest
    }
}

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest matching entry. Unreadable lines are skipped.
    pub fn lookup(&self, key: &CacheKey, caps: &Caps) -> std::io::Result<Option<CacheEntry>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut found = None;
        for line in BufReader::new(file).lines() {
            let line = line?;
            if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
                if entry.serves(key, caps) {
                    found = Some(entry);
                }
            }
        }
        Ok(found)
    }

    pub fn store(&self, entry: &CacheEntry) -> std::io::Result<()> {
        let mut line = serde_json::to_string(entry).expect("entry serialises");
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(line.as_bytes())
    }
}
