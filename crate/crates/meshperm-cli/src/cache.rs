//! Content-addressed result cache: one JSON file per distribution table,
//! keyed by (kind, canonical pattern, d, n). Cache misses and unreadable
//! entries fall back to recomputation.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableJson {
    pub d: usize,
    pub n: usize,
    pub counts: Vec<String>,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn key(kind: &str, canonical_pattern: &str, d: usize, n: usize) -> String {
        let mut hasher = Sha256::new();
        hasher.update(kind.as_bytes());
        hasher.update([0]);
        hasher.update(canonical_pattern.as_bytes());
        hasher.update([0]);
        hasher.update(d.to_le_bytes());
        hasher.update(n.to_le_bytes());
        format!("{:x}", hasher.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<TableJson> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, table: &TableJson) {
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let text = serde_json::to_string(table).expect("table serializes");
        // cache write failures only cost a future recomputation
        let _ = fs::write(self.path(key), text);
    }
}
