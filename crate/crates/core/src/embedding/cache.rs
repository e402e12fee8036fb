use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tracing::warn;

use super::EmbeddingError;

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    model_id: String,
    values: Vec<f64>,
}

/// Content-addressed embedding cache on disk.
///
/// One file per `(model_id, text)`, named by the SHA-256 of the pair and
/// fanned out over 256 subdirectories. Writes go through a temp file and an
/// atomic rename, so concurrent readers in other processes never observe a
/// partial entry. Within a process, readers share a lock and writers take it
/// exclusively.
#[derive(Debug)]
pub struct EmbeddingCache {
    dir: PathBuf,
    lock: RwLock<()>,
}

impl EmbeddingCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, EmbeddingError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|source| EmbeddingError::Cache {
            path: dir.clone(),
            source,
        })?;
        Ok(Self {
            dir,
            lock: RwLock::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex SHA-256 over `model_id`, a NUL separator, and `text`.
    pub fn key(model_id: &str, text: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(model_id.as_bytes());
        hasher.update([0u8]);
        hasher.update(text.as_bytes());
        hex::encode(hasher.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{}.json", &key[2..]))
    }

    pub fn get(&self, model_id: &str, text: &str) -> Result<Option<Vec<f64>>, EmbeddingError> {
        let path = self.path_for(&Self::key(model_id, text));
        let _guard = self.lock.read().unwrap_or_else(|e| e.into_inner());
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(EmbeddingError::Cache { path, source }),
        };
        match serde_json::from_slice::<CacheEntry>(&bytes) {
            Ok(entry) if entry.model_id == model_id => Ok(Some(entry.values)),
            Ok(_) => Ok(None),
            Err(e) => {
                warn!(path = %path.display(), error = %e, "ignoring corrupt cache entry");
                Ok(None)
            }
        }
    }

    pub fn put(&self, model_id: &str, text: &str, values: &[f64]) -> Result<(), EmbeddingError> {
        let path = self.path_for(&Self::key(model_id, text));
        let parent = path.parent().expect("cache paths have a parent");
        let io_err = |source| EmbeddingError::Cache {
            path: path.clone(),
            source,
        };
        let _guard = self.lock.write().unwrap_or_else(|e| e.into_inner());
        fs::create_dir_all(parent).map_err(io_err)?;
        let entry = CacheEntry {
            model_id: model_id.to_string(),
            values: values.to_vec(),
        };
        let bytes = serde_json::to_vec(&entry).expect("cache entry serializes");
        let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(io_err)?;
        tmp.write_all(&bytes).map_err(io_err)?;
        tmp.persist(&path).map_err(|e| io_err(e.error))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EmbeddingCache::open(dir.path()).unwrap();
        assert_eq!(cache.get("m", "hello").unwrap(), None);
        cache.put("m", "hello", &[0.25, -1.5, 1e-300]).unwrap();
        assert_eq!(cache.get("m", "hello").unwrap(), Some(vec![0.25, -1.5, 1e-300]));
        assert_eq!(cache.get("other-model", "hello").unwrap(), None);
    }

    #[test]
    fn key_separates_model_and_text() {
        assert_ne!(EmbeddingCache::key("ab", "c"), EmbeddingCache::key("a", "bc"));
        assert_eq!(EmbeddingCache::key("m", "t").len(), 64);
    }

    #[test]
    fn corrupt_entry_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EmbeddingCache::open(dir.path()).unwrap();
        cache.put("m", "x", &[1.0]).unwrap();
        let path = cache.path_for(&EmbeddingCache::key("m", "x"));
        fs::write(&path, b"{not json").unwrap();
        assert_eq!(cache.get("m", "x").unwrap(), None);
    }
}
