//! On-disk cache of profile measures: one JSON object per line, keyed by a
//! stable hash of `(fingerprint, q, e, c)`.
//!
//! Writes replace the whole file atomically (write to a sibling, then rename).

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "REPZETA_CACHE";
const FILE_NAME: &str = "profiles.jsonl";

/// One stored histogram; profiles and counts are strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub fingerprint: String,
    pub q: u64,
    pub e: u32,
    pub c: u32,
    pub histogram: Vec<(String, String)>,
}

/// 64-bit FNV-1a; stable across platforms and toolchains.
pub fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn cache_key(fingerprint: &str, q: u64, e: u32, c: u32) -> String {
    format!("{:016x}", stable_hash(&format!("{fingerprint}|q={q}|e={e}|c={c}")))
}

#[derive(Debug, Clone)]
pub struct ProfileCache {
    dir: PathBuf,
}

impl ProfileCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ProfileCache { dir: dir.into() }
    }

    /// The cache named by `REPZETA_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).map(ProfileCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file(&self) -> PathBuf {
        self.dir.join(FILE_NAME)
    }

    /// All records sorted by key.
    pub fn load(&self) -> io::Result<BTreeMap<String, CacheRecord>> {
        let text = match fs::read_to_string(self.file()) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(e),
        };
        let mut out = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let rec: CacheRecord =
                serde_json::from_str(line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            out.insert(rec.key.clone(), rec);
        }
        Ok(out)
    }

    fn store(&self, recs: &BTreeMap<String, CacheRecord>) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut text = String::new();
        for r in recs.values() {
            text.push_str(&serde_json::to_string(r).map_err(io::Error::other)?);
            text.push('\n');
        }
        let tmp = self.dir.join(format!("{FILE_NAME}.{}.tmp", std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.file())
    }

    pub fn get(&self, key: &str) -> io::Result<Option<CacheRecord>> {
        Ok(self.load()?.remove(key))
    }

    pub fn put(&self, rec: CacheRecord) -> io::Result<()> {
        let mut all = self.load()?;
        all.insert(rec.key.clone(), rec);
        self.store(&all)
    }

    /// Removes a record; returns whether it existed.
    pub fn evict(&self, key: &str) -> io::Result<bool> {
        let mut all = self.load()?;
        let hit = all.remove(key).is_some();
        if hit {
            self.store(&all)?;
        }
        Ok(hit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_evict() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ProfileCache::new(dir.path());
        let key = cache_key("sl2", 3, 1, 2);
        let rec = CacheRecord {
            key: key.clone(),
            fingerprint: "sl2".into(),
            q: 3,
            e: 1,
            c: 2,
            histogram: vec![("0".into(), "702".into())],
        };
        cache.put(rec.clone()).unwrap();
        assert_eq!(cache.get(&key).unwrap(), Some(rec));
        assert!(cache.evict(&key).unwrap());
        assert!(!cache.evict(&key).unwrap());
    }

    #[test]
    fn keys_are_stable() {
        assert_eq!(stable_hash(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(cache_key("x", 3, 1, 1), cache_key("x", 3, 1, 1));
        assert_ne!(cache_key("x", 3, 1, 1), cache_key("x", 3, 1, 2));
    }
}
