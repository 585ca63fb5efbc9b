use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;
use steinhaus_core::set_model::decode_set;
use steinhaus_core::{CompactSet, Scalar};
use tempfile::NamedTempFile;

use crate::Failure;

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let v = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(v)
}

pub fn read_set<T: Scalar>(path: &Path) -> Result<CompactSet<T>> {
    let v = read_json(path)?;
    decode_set(&v).map_err(|e| Failure::from_core(e, &path.display().to_string()).into())
}

/// Sink for one command's results: files under `--out`, or stdout.
pub struct Output {
    dir: Option<PathBuf>,
    /// Pending files, written only after the command has succeeded.
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Output { dir, files: Vec::new() }
    }

    /// Queues `name`; without `--out` the main result goes to stdout and
    /// side files are dropped.
    pub fn add(&mut self, name: &str, bytes: Vec<u8>, main: bool) {
        match &self.dir {
            Some(d) => self.files.push((d.join(name), bytes)),
            None if main => self.files.push((PathBuf::new(), bytes)),
            None => {}
        }
    }

    pub fn add_json(&mut self, name: &str, v: &Value, main: bool) {
        let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
        text.push('\n');
        self.add(name, text.into_bytes(), main);
    }

    pub fn commit(self) -> Result<()> {
        for (path, bytes) in self.files {
            if path.as_os_str().is_empty() {
                std::io::stdout().write_all(&bytes)?;
            } else {
                write_atomic(&path, &bytes)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
