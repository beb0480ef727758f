//! On-disk atom-set cache keyed by a hash of the canonical ground-set JSON
//! and the tool version.
//!
//! Entries are written to a temporary file and renamed into place. A read
//! that fails to parse, names another version or key, or carries atoms that
//! are not zero-sum over the requested ground set is treated as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diophantine::SearchLimits;
use crate::error::Result;
use crate::zerosum::{atoms_with_limits, remember_atoms, AtomSet, GroundSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_DIR_ENV: &str = "BLOCKMONOID_CACHE_DIR";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheEntry {
    pub key: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub created: u64,
    pub payload: AtomSet,
}

pub fn cache_key(g0: &GroundSet) -> String {
    let mut h = Sha256::new();
    h.update(VERSION.as_bytes());
    h.update(b"\n");
    h.update(g0.canonical_json().as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone)]
pub struct AtomCache {
    dir: PathBuf,
}

impl AtomCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `explicit`, else `$BLOCKMONOID_CACHE_DIR`, else the user cache
    /// directory (`$XDG_CACHE_HOME` or `~/.cache`).
    pub fn locate(explicit: Option<&Path>) -> Option<Self> {
        if let Some(p) = explicit {
            return Some(Self::new(p));
        }
        if let Some(p) = std::env::var_os(CACHE_DIR_ENV).filter(|p| !p.is_empty()) {
            return Some(Self::new(p));
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .filter(|p| !p.is_empty())
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
        Some(Self::new(base.join("blockmonoid")))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, g0: &GroundSet) -> Option<Arc<AtomSet>> {
        let key = cache_key(g0);
        let text = fs::read_to_string(self.path(&key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.version != VERSION || entry.key != key || **entry.payload.ground() != *g0 {
            return None;
        }
        Some(Arc::new(entry.payload))
    }

    pub fn put(&self, atoms: &AtomSet) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let key = cache_key(atoms.ground());
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let entry = CacheEntry { key: key.clone(), version: VERSION.to_string(), created, payload: atoms.clone() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.flush()?;
        tmp.persist(self.path(&key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached atoms if valid, otherwise computed and stored. Either way the
    /// result is registered with the in-process memo.
    pub fn atoms(&self, g0: &GroundSet, limits: SearchLimits) -> Result<(Arc<AtomSet>, bool)> {
        if let Some(hit) = self.get(g0) {
            remember_atoms(hit.clone());
            return Ok((hit, true));
        }
        let atoms = atoms_with_limits(g0, limits)?;
        // an unwritable cache only costs a recomputation next time
        let _ = self.put(&atoms);
        Ok((atoms, false))
    }
}
