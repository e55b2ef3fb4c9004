use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Overrides the cache location.
pub const CACHE_ENV: &str = "QMARK_CACHE_DIR";

pub fn cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Path::new(&dir).join("qmark");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return Path::new(&home).join(".cache").join("qmark");
    }
    PathBuf::from(".qmark-cache")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Content hash of the canonical JSON form of `key`.
pub fn cache_key<T: Serialize>(key: &T) -> String {
    sha256_hex(&serde_json::to_vec(key).expect("cache key serializes"))
}

pub fn lookup(name: &str) -> Option<Vec<u8>> {
    fs::read(cache_dir().join(name)).ok()
}

pub fn store(name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
    let dir = cache_dir();
    fs::create_dir_all(&dir)?;
    let path = dir.join(name);
    write_atomic(&path, bytes)?;
    Ok(path)
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
