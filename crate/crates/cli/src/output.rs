//! Run-output plumbing: content-addressed directories and plain-text
//! artifact writers.
//!
//! A run's directory name is derived from a hash of its canonical
//! configuration string, so distinct configurations never collide and a
//! repeated configuration rewrites byte-identical files instead of
//! mutating anything.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// FNV-1a over the canonical configuration text; stable across runs and
/// platforms by construction.
pub fn config_hash(canonical: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in canonical.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Creates (if needed) and returns `root/<command>-<hash>` for a run.
pub fn run_dir(root: &Path, command: &str, canonical: &str) -> io::Result<PathBuf> {
    let dir = root.join(format!("{command}-{:016x}", config_hash(canonical)));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

pub fn write_artifact(dir: &Path, name: &str, content: &str) -> io::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, content)?;
    Ok(path)
}

/// Minimal CSV assembly; all numbers format through Rust's shortest
/// round-trip notation, which is deterministic for identical values.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut buf = String::with_capacity(4096);
        buf.push_str(header);
        buf.push('\n');
        Self { buf }
    }

    pub fn row(&mut self, fields: &[&dyn std::fmt::Display]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            use std::fmt::Write;
            write!(self.buf, "{f}").expect("string write");
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(config_hash("abc"), config_hash("abc"));
        assert_ne!(config_hash("abc"), config_hash("abd"));
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new("a,b");
        csv.row(&[&1.5, &"x"]);
        assert_eq!(csv.finish(), "a,b\n1.5,x\n");
    }
}
