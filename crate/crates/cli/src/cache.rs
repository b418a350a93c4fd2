//! On-disk JSON cache of generic artifacts, keyed by kind, type and code version.

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct Entry<T> {
    version: String,
    convention: String,
    value: T,
}

pub struct Cache {
    dir: Option<PathBuf>,
    pub hits: Vec<String>,
    pub writes: Vec<String>,
}

impl Cache {
    pub fn new(dir: Option<&Path>) -> Self {
        Cache { dir: dir.map(Path::to_path_buf), hits: Vec::new(), writes: Vec::new() }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}-v{}.json", env!("CARGO_PKG_VERSION"))))
    }

    /// Read `key`, or compute and store it. Unreadable entries are recomputed.
    pub fn get_or<T: Serialize + DeserializeOwned>(&mut self, key: &str, compute: impl FnOnce() -> Result<T>) -> Result<T> {
        let Some(path) = self.path(key) else { return compute() };
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(e) = serde_json::from_str::<Entry<T>>(&text) {
                if e.convention == qpres::braiding::CONVENTION {
                    self.hits.push(key.into());
                    return Ok(e.value);
                }
            }
        }
        let value = compute()?;
        let entry = Entry { version: env!("CARGO_PKG_VERSION").into(), convention: qpres::braiding::CONVENTION.into(), value };
        let dir = path.parent().unwrap();
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        // write to a private file, then rename over the key
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(&entry)?).with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, &path).with_context(|| format!("renaming to {}", path.display()))?;
        self.writes.push(key.into());
        Ok(entry.value)
    }
}
