//! On-disk cache of rendered reports.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "NUMSEMI_CACHE_DIR";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub command: String,
    pub params: String,
    pub exit_code: i32,
    pub payload: String,
    pub checksum: String,
}

pub fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(CacheEntry),
    Miss,
    /// Unreadable, checksum mismatch, or written by another version.
    Discarded(String),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache {
            dir: dir.into(),
            version: VERSION.to_string(),
        }
    }

    pub fn with_version(mut self, version: &str) -> Self {
        self.version = version.to_string();
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, command: &str, params: &str) -> PathBuf {
        let key = checksum(&format!("{}\n{command}\n{params}", self.version));
        self.dir.join(format!("{command}-{}.json", &key[..16]))
    }

    pub fn get(&self, command: &str, params: &str) -> Lookup {
        let path = self.path_for(command, params);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Discarded(format!("{}: {e}", path.display())),
        };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Lookup::Discarded(format!("{}: {e}", path.display())),
        };
        if entry.version != self.version || entry.command != command || entry.params != params {
            return Lookup::Discarded(format!("{}: stale entry", path.display()));
        }
        if checksum(&entry.payload) != entry.checksum {
            return Lookup::Discarded(format!("{}: checksum mismatch", path.display()));
        }
        Lookup::Hit(entry)
    }

    pub fn put(
        &self,
        command: &str,
        params: &str,
        exit_code: i32,
        payload: &str,
    ) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            version: self.version.clone(),
            command: command.to_string(),
            params: params.to_string(),
            exit_code,
            payload: payload.to_string(),
            checksum: checksum(payload),
        };
        let path = self.path_for(command, params);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(&entry)?)?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        assert_eq!(cache.get("count", "f=5"), Lookup::Miss);
        cache.put("count", "f=5", 0, "{\"N\":5}\n").unwrap();
        let Lookup::Hit(e) = cache.get("count", "f=5") else {
            panic!("expected hit")
        };
        assert_eq!(e.payload, "{\"N\":5}\n");

        let path = cache.path_for("count", "f=5");
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("\\\"N\\\":5", "\\\"N\\\":6");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.get("count", "f=5"), Lookup::Discarded(_)));

        fs::write(&path, "not json").unwrap();
        assert!(matches!(cache.get("count", "f=5"), Lookup::Discarded(_)));
    }

    #[test]
    fn versions_do_not_share_entries() {
        let dir = tempfile::tempdir().unwrap();
        let old = Cache::new(dir.path()).with_version("0.0.1");
        old.put("count", "f=5", 0, "x").unwrap();
        let new = Cache::new(dir.path());
        assert_eq!(new.get("count", "f=5"), Lookup::Miss);
        // A file carrying an old version under the current key is stale.
        fs::copy(old.path_for("count", "f=5"), new.path_for("count", "f=5")).unwrap();
        assert!(matches!(new.get("count", "f=5"), Lookup::Discarded(_)));
    }
}
