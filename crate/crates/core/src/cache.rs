//! On-disk cache of point counts, one JSON file per (curve, p).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curves::CurveSpec;
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub curve: String,
    pub p: u64,
    /// Largest extension degree counted; `N_k.len() == k`.
    pub k: usize,
    /// N_1, …, N_k
    #[serde(rename = "N_k")]
    pub n_k: Vec<u64>,
    pub tool_version: String,
}

impl CacheEntry {
    pub fn new(curve: &str, p: u64, n_k: Vec<u64>) -> Self {
        CacheEntry { curve: curve.to_string(), p, k: n_k.len(), n_k, tool_version: TOOL_VERSION.to_string() }
    }
}

/// Catalog curves keep their name; anything else is keyed by a hash of its
/// coefficients so that two different curves never share a file.
pub fn cache_key(curve: &CurveSpec) -> String {
    if crate::curves::catalog_curve(curve.name()).is_some_and(|c| c.coeffs() == curve.coeffs()) {
        return curve.name().to_string();
    }
    let text: Vec<String> = curve.coeffs().iter().map(i64::to_string).collect();
    format!("custom-{:016x}", fnv1a(text.join(",").as_bytes()))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

#[derive(Clone, Debug)]
pub struct CountCache {
    dir: PathBuf,
}

impl CountCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CountCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &str, p: u64) -> PathBuf {
        self.dir.join(format!("{key}-p{p}.json"))
    }

    /// A missing file, unreadable JSON or a different tool version all read as
    /// a miss.
    pub fn load(&self, key: &str, p: u64) -> Option<CacheEntry> {
        let path = self.path(key, p);
        let text = fs::read_to_string(&path).ok()?;
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("ignoring malformed cache file {}: {e}", path.display());
                return None;
            }
        };
        if entry.tool_version != TOOL_VERSION {
            log::warn!("ignoring cache file {} from version {}", path.display(), entry.tool_version);
            return None;
        }
        if entry.curve != key || entry.p != p || entry.k != entry.n_k.len() {
            log::warn!("ignoring inconsistent cache file {}", path.display());
            return None;
        }
        Some(entry)
    }

    /// Writes the entry unless an existing one already holds at least as many counts.
    pub fn store(&self, entry: &CacheEntry) -> Result<()> {
        if let Some(existing) = self.load(&entry.curve, entry.p) {
            if existing.k >= entry.k {
                if existing.n_k[..entry.k] != entry.n_k[..] {
                    return Err(Error::Config(format!(
                        "cached counts for {} at p = {} disagree with fresh ones",
                        entry.curve, entry.p
                    )));
                }
                return Ok(());
            }
        }
        fs::create_dir_all(&self.dir)?;
        let mut text = serde_json::to_string_pretty(entry).expect("cache entry serializes");
        text.push('\n');
        fs::write(self.path(&entry.curve, entry.p), text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::catalog_curve;

    #[test]
    fn round_trip_and_version_check() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CountCache::new(dir.path());
        assert!(cache.load("C1", 7).is_none());
        let e = CacheEntry::new("C1", 7, vec![8, 50]);
        cache.store(&e).unwrap();
        assert_eq!(cache.load("C1", 7), Some(e.clone()));

        let text = fs::read_to_string(cache.path("C1", 7)).unwrap();
        assert!(text.contains("\"N_k\""));
        fs::write(cache.path("C1", 7), text.replace(TOOL_VERSION, "0.0.0-old")).unwrap();
        assert!(cache.load("C1", 7).is_none());
    }

    #[test]
    fn store_keeps_longer_entry_and_rejects_conflicts() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CountCache::new(dir.path());
        cache.store(&CacheEntry::new("C1", 7, vec![8, 50, 344])).unwrap();
        cache.store(&CacheEntry::new("C1", 7, vec![8, 50])).unwrap();
        assert_eq!(cache.load("C1", 7).unwrap().k, 3);
        assert!(cache.store(&CacheEntry::new("C1", 7, vec![9])).is_err());
    }

    #[test]
    fn keys() {
        assert_eq!(cache_key(&catalog_curve("C3").unwrap()), "C3");
        let custom = CurveSpec::from_descending("C3", &[1, 0, 0, 1]).unwrap();
        let key = cache_key(&custom);
        assert!(key.starts_with("custom-"));
        assert_eq!(key.len(), "custom-".len() + 16);
        let other = CurveSpec::from_descending("x", &[1, 0, 0, 2]).unwrap();
        assert_ne!(cache_key(&other), key);
    }
}
