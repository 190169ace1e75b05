//! JSON-lines tensor cache: a header line, then one canonical entry per
//! line in index order.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{canonical, selection_rule, Index4, TensorEntry};
use crate::error::{Result, WpError};

pub const CACHE_FORMAT: &str = "wp-tensor";
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    truncation: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TensorCache {
    pub truncation: usize,
    entries: BTreeMap<Index4, TensorEntry>,
}

/// Conventional file name `tensor-N<rank>.jsonl`.
pub fn cache_file_name(n: usize) -> String {
    format!("tensor-N{n}.jsonl")
}

impl TensorCache {
    pub fn new(truncation: usize) -> Self {
        Self { truncation, entries: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &TensorEntry> {
        self.entries.values()
    }

    pub fn contains(&self, idx: Index4) -> bool {
        !selection_rule(idx) || self.entries.contains_key(&canonical(idx))
    }

    /// Entry value for any index ordering; selection-rule zeros need no
    /// storage.
    pub fn get(&self, idx: Index4) -> Option<f64> {
        if !selection_rule(idx) {
            return Some(0.0);
        }
        self.entries.get(&canonical(idx)).map(|e| e.value)
    }

    pub fn require(&self, idx: Index4) -> Result<f64> {
        self.get(idx).ok_or(WpError::MissingEntry(idx))
    }

    pub fn insert(&mut self, mut entry: TensorEntry) {
        entry.indices = canonical(entry.indices);
        let top = *entry.indices.iter().max().unwrap_or(&0) as usize;
        self.truncation = self.truncation.max(top);
        self.entries.insert(entry.indices, entry);
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let header = Header { format: CACHE_FORMAT.into(), version: CACHE_FORMAT_VERSION, truncation: self.truncation };
        let mut out = serde_json::to_string(&header)?;
        out.push('\n');
        for e in self.entries.values() {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str, origin: &str) -> Result<Self> {
        let bad = |message: String| WpError::Format { path: origin.to_string(), message };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Header = serde_json::from_str(lines.next().ok_or_else(|| bad("empty file".into()))?)
            .map_err(|e| bad(format!("header: {e}")))?;
        if header.format != CACHE_FORMAT || header.version != CACHE_FORMAT_VERSION {
            return Err(bad(format!("unsupported format {} v{}", header.format, header.version)));
        }
        let mut cache = Self::new(header.truncation);
        for (k, line) in lines.enumerate() {
            let entry: TensorEntry = serde_json::from_str(line).map_err(|e| bad(format!("line {}: {e}", k + 2)))?;
            cache.insert(entry);
        }
        Ok(cache)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut file = fs::File::create(path)?;
        file.write_all(self.to_jsonl()?.as_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_jsonl(&fs::read_to_string(path)?, &path.display().to_string())
    }

    /// Loads the file if present, otherwise starts empty.
    pub fn open_or_new(path: impl AsRef<Path>, truncation: usize) -> Result<Self> {
        let path = path.as_ref();
        if path.exists() {
            let mut c = Self::load(path)?;
            c.truncation = c.truncation.max(truncation);
            Ok(c)
        } else {
            Ok(Self::new(truncation))
        }
    }

    /// SHA-256 of the serialized cache, hex encoded.
    pub fn content_hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_jsonl()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// Path of the missing-tuple manifest written next to a partial cache.
pub fn manifest_path(cache_path: &Path) -> PathBuf {
    let mut s = cache_path.as_os_str().to_owned();
    s.push(".missing.json");
    PathBuf::from(s)
}
