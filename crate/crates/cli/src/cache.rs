//! The JSON result cache: one document holding a `CountResult` per order and,
//! when computed, its orbit list.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bcb_core::{CountResult, OrbitSummary};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "BCB_CACHE";
pub const DEFAULT_CACHE_FILE: &str = "bcb-cache.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub count: CountResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitSummary>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultCache {
    path: PathBuf,
    entries: BTreeMap<usize, CacheEntry>,
}

/// `$BCB_CACHE` if set, else `./bcb-cache.json`.
pub fn default_path() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
}

impl ResultCache {
    pub fn empty(path: impl Into<PathBuf>) -> Self {
        ResultCache {
            path: path.into(),
            entries: BTreeMap::new(),
        }
    }

    /// Loads the cache at `path`; a missing file is an empty cache.
    pub fn open(path: impl Into<PathBuf>) -> CliResult<Self> {
        let path = path.into();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::empty(path)),
            Err(e) => return Err(e.into()),
        };
        let bad = |message: String| CliError::Cache {
            path: path.clone(),
            message,
        };
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(bad(format!(
                "schema version {} is not {SCHEMA_VERSION}",
                file.schema_version
            )));
        }
        let mut entries = BTreeMap::new();
        for (key, entry) in file.entries {
            let n: usize = key.parse().map_err(|_| bad(format!("bad key {key:?}")))?;
            if entry.count.n != n {
                return Err(bad(format!("entry {key} holds row {}", entry.count.n)));
            }
            entries.insert(n, entry);
        }
        Ok(ResultCache { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&CacheEntry> {
        self.entries.get(&n)
    }

    /// Stores a count, replacing the whole entry. A count that disagrees with
    /// the cached one is refused; orbits survive when the counts agree.
    pub fn insert_count(&mut self, count: CountResult) -> CliResult<()> {
        let orbits = match self.entries.remove(&count.n) {
            Some(old) if !old.count.same_counts(&count) => {
                let n = count.n;
                let old_total = old.count.total.clone();
                self.entries.insert(n, old);
                return Err(CliError::Verification(format!(
                    "cached J_{n} = {old_total} differs from recomputed {}",
                    count.total
                )));
            }
            Some(old) => old.orbits,
            None => None,
        };
        self.entries.insert(count.n, CacheEntry { count, orbits });
        Ok(())
    }

    /// Attaches orbits to an existing entry, replacing the entry.
    pub fn insert_orbits(&mut self, n: usize, orbits: Vec<OrbitSummary>) -> CliResult<()> {
        let Some(old) = self.entries.remove(&n) else {
            return Err(CliError::Verification(format!("no cached count for row {n}")));
        };
        self.entries.insert(
            n,
            CacheEntry {
                count: old.count,
                orbits: Some(orbits),
            },
        );
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = CacheFile {
            schema_version: SCHEMA_VERSION,
            entries: self
                .entries
                .iter()
                .map(|(n, e)| (n.to_string(), e.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("cache serializes")
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn save(&self) -> CliResult<()> {
        let dir = match self.path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let name = self
            .path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| DEFAULT_CACHE_FILE.into());
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_json().as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bcb_core::{canonical_orbits, count_bisections, CountConfig, Strategy};

    fn count(n: usize) -> CountResult {
        count_bisections(n, Strategy::MeetInMiddle, &CountConfig::default()).unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let mut c = ResultCache::open(&path).unwrap();
        assert!(c.is_empty());
        for n in [8, 13, 14] {
            c.insert_count(count(n)).unwrap();
        }
        c.insert_orbits(13, canonical_orbits(13, &CountConfig::default()).unwrap()).unwrap();
        c.save().unwrap();
        let back = ResultCache::open(&path).unwrap();
        // elapsed time is stored in whole milliseconds
        assert_eq!(back.len(), 3);
        for n in [8, 13, 14] {
            let (a, b) = (back.get(n).unwrap(), c.get(n).unwrap());
            assert!(a.count.same_counts(&b.count));
            assert_eq!(a.count.elapsed.as_millis(), b.count.elapsed.as_millis());
            assert_eq!(a.orbits, b.orbits);
        }
        assert_eq!(back.to_json(), c.to_json());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"total\": \"144\""));
    }

    #[test]
    fn refuses_conflicting_count() {
        let mut c = ResultCache::empty("unused.json");
        c.insert_count(count(8)).unwrap();
        let mut wrong = count(8);
        wrong.total = 8u32.into();
        assert!(matches!(c.insert_count(wrong), Err(CliError::Verification(_))));
        assert_eq!(c.get(8).unwrap().count.total, 6u32.into());
        assert!(c.insert_orbits(9, Vec::new()).is_err());
    }

    #[test]
    fn rejects_other_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"schema_version": 7, "entries": {}}"#).unwrap();
        assert!(matches!(ResultCache::open(&path), Err(CliError::Cache { .. })));
        std::fs::write(&path, "not json").unwrap();
        assert!(ResultCache::open(&path).is_err());
    }
}
