//! On-disk artifact cache, one directory per `n`.
//!
//! Every file starts with a header line carrying the format version and the
//! SHA-256 of the payload that follows. A file whose header does not match
//! is treated as absent and gets recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use linkcount::fpl::FORMAT_VERSION;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "LINKCOUNT_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    root: Option<PathBuf>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(String),
    Missing,
    Corrupt(String),
}

fn header(payload: &str) -> String {
    format!("# linkcount-cache format_version={FORMAT_VERSION} sha256={}\n", checksum(payload))
}

fn checksum(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

impl Cache {
    /// `root = None` disables the cache.
    pub fn new(root: Option<PathBuf>) -> Self {
        Self { root }
    }

    /// Explicit root if given, else `$XDG_CACHE_HOME/linkcount` or
    /// `$HOME/.cache/linkcount`.
    pub fn default_root(explicit: Option<PathBuf>) -> Option<PathBuf> {
        explicit.or_else(|| {
            std::env::var_os("XDG_CACHE_HOME")
                .map(PathBuf::from)
                .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))
                .map(|base| base.join("linkcount"))
        })
    }

    pub fn path(&self, n: usize, name: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(format!("n{n}")).join(name))
    }

    pub fn load(&self, n: usize, name: &str) -> Lookup {
        let Some(path) = self.path(n, name) else { return Lookup::Missing };
        let Ok(text) = fs::read_to_string(&path) else { return Lookup::Missing };
        let Some((first, payload)) = text.split_once('\n') else {
            return Lookup::Corrupt(format!("{}: missing header", path.display()));
        };
        if format!("{first}\n") != header(payload) {
            return Lookup::Corrupt(format!("{}: header or checksum mismatch", path.display()));
        }
        Lookup::Hit(payload.to_string())
    }

    pub fn store(&self, n: usize, name: &str, payload: &str) -> Result<()> {
        let Some(path) = self.path(n, name) else { return Ok(()) };
        let dir = path.parent().expect("cache file has a parent");
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, format!("{}{payload}", header(payload)))
            .with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    /// Cached payload, or `compute` (stored afterwards) on a miss. Corrupt
    /// entries are reported on stderr and overwritten.
    pub fn get_or_compute(&self, n: usize, name: &str, compute: impl FnOnce() -> Result<String>) -> Result<String> {
        match self.load(n, name) {
            Lookup::Hit(payload) => return Ok(payload),
            Lookup::Corrupt(why) => eprintln!("warning: ignoring cached {name}: {why}; recomputing"),
            Lookup::Missing => {}
        }
        let payload = compute()?;
        self.store(n, name, &payload)?;
        Ok(payload)
    }
}
