//! On-disk cache of expensive results, one JSON file per key.
//!
//! Keys hash the canonical text of every object a query reads together with
//! the query parameters. Entries are written to a temporary file in the
//! cache directory and renamed into place, so readers never see a partial
//! entry.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::report::Outcome;

const FORMAT: &str = "jumploci-cache-1";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// What happened to one lookup, echoed in the report's timing block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheUse {
    Disabled,
    Hit,
    Miss,
    NotApplicable,
}

impl CacheUse {
    pub fn as_str(self) -> &'static str {
        match self {
            CacheUse::Disabled => "disabled",
            CacheUse::Hit => "hit",
            CacheUse::Miss => "miss",
            CacheUse::NotApplicable => "not-applicable",
        }
    }
}

pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(FORMAT.as_bytes());
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Unreadable or malformed entries count as misses.
    pub fn get(&self, key: &str) -> Option<Outcome> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        Outcome::from_cache_value(&v)
    }

    pub fn put(&self, key: &str, outcome: &Outcome) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let text = serde_json::to_string(&outcome.to_cache_value()).map_err(std::io::Error::other)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{CertKind, Status};
    use serde_json::json;

    #[test]
    fn keys_separate_parts() {
        assert_ne!(key(&["ab", "c"]), key(&["a", "bc"]));
        assert_eq!(key(&["x"]), key(&["x"]));
        assert_eq!(key(&["x"]).len(), 64);
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path().join("nested"));
        let k = key(&["q"]);
        assert!(c.get(&k).is_none());
        let o = Outcome::new(Status::Certified, CertKind::Exact, json!({"a": 1}), "ok");
        c.put(&k, &o).unwrap();
        assert_eq!(c.get(&k), Some(o));
        std::fs::write(c.path(&k), "{ truncated").unwrap();
        assert!(c.get(&k).is_none());
    }
}
