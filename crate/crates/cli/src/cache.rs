//! On-disk cache of structure-constant tables, one versioned JSON file per
//! (datum, n, table kind, block).

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_VERSION: &str = "monohecke-cache-1";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

/// What a cache entry describes; hashed into the file name.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheKey(Value);

impl CacheKey {
    pub fn new(datum: &str, n: u32, kind: &str, block: &Value) -> Self {
        CacheKey(json!({ "datum": datum, "n": n, "kind": kind, "block": block }))
    }

    fn digest(&self, version: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(version.as_bytes());
        hasher.update(self.0.to_string().as_bytes());
        format!("{:x}", hasher.finalize())
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: &str) -> Self {
        Cache {
            dir: dir.into(),
            version: version.to_string(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest(&self.version)))
    }

    /// The stored payload, or `None` on a miss. Entries that fail to parse or
    /// belong to another version or key count as misses.
    pub fn get(&self, key: &CacheKey) -> Option<Value> {
        let path = self.path(key);
        let bytes = fs::read(&path).ok()?;
        let entry: Value = match serde_json::from_slice(&bytes) {
            Ok(v) => v,
            Err(_) => {
                eprintln!("warning: corrupt cache entry {}, recomputing", path.display());
                return None;
            }
        };
        if entry.get("version").and_then(Value::as_str) != Some(self.version.as_str())
            || entry.get("key") != Some(&key.0)
        {
            return None;
        }
        match entry.get("payload") {
            Some(p) => Some(p.clone()),
            None => {
                eprintln!("warning: cache entry {} has no payload, recomputing", path.display());
                None
            }
        }
    }

    /// Writes an entry atomically while holding the directory lock.
    pub fn put(&self, key: &CacheKey, payload: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))?;
        lock.lock()?;
        let entry = json!({ "version": self.version, "key": key.0, "payload": payload });
        let path = self.path(key);
        let tmp = path.with_extension("json.tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(entry.to_string().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        lock.unlock()
    }
}
