//! Content-addressed result cache, keyed by operation and canonical config.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use super::report::write_atomic;

#[derive(Debug, Clone)]
pub struct StageCache {
    dir: PathBuf,
}

impl StageCache {
    pub fn new(dir: impl Into<PathBuf>) -> StageCache {
        StageCache { dir: dir.into() }
    }

    pub fn key(operation: &str, canonical_config: &str) -> String {
        let mut h = Sha256::new();
        h.update(operation.as_bytes());
        h.update([0]);
        h.update(canonical_config.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.txt"))
    }

    pub fn get(&self, operation: &str, canonical_config: &str) -> Option<String> {
        fs::read_to_string(self.path(&Self::key(operation, canonical_config))).ok()
    }

    /// Stores `value`. Writing the same key twice is harmless: values are a
    /// function of the key.
    pub fn put(&self, operation: &str, canonical_config: &str, value: &str) -> std::io::Result<()> {
        write_atomic(&self.path(&Self::key(operation, canonical_config)), value)
    }

    pub fn get_or_compute<E>(
        &self,
        operation: &str,
        canonical_config: &str,
        compute: impl FnOnce() -> Result<String, E>,
    ) -> Result<String, E> {
        if let Some(v) = self.get(operation, canonical_config) {
            return Ok(v);
        }
        let v = compute()?;
        // A failed write only loses the optimisation.
        let _ = self.put(operation, canonical_config, &v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_after_miss() {
        let dir = tempfile::tempdir().unwrap();
        let c = StageCache::new(dir.path());
        assert_eq!(c.get("op", "a = 1"), None);
        let v: Result<String, ()> = c.get_or_compute("op", "a = 1", || Ok("result".into()));
        assert_eq!(v.unwrap(), "result");
        let again: Result<String, ()> = c.get_or_compute("op", "a = 1", || panic!("should be cached"));
        assert_eq!(again.unwrap(), "result");
        assert_ne!(StageCache::key("op", "a = 1"), StageCache::key("op", "a = 2"));
    }
}
