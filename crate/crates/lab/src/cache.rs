use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::output::Verdict;

pub const CACHE_ENV: &str = "REPELLER_LAB_CACHE";

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    key: String,
    verdict: Verdict,
    files: Vec<(String, String)>,
}

/// Finished runs keyed by configuration hash. A hit is used only if the
/// manifest key matches and every file checksum verifies.
pub struct Cache {
    root: Option<PathBuf>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn disabled() -> Self {
        Self { root: None }
    }

    /// `$REPELLER_LAB_CACHE` if set, else `<out>/.cache`.
    pub fn new(enabled: bool, out: &Path) -> Self {
        if !enabled {
            return Self::disabled();
        }
        let root = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| out.join(".cache"));
        Self { root: Some(root) }
    }

    fn entry(&self, command: &str, key: &str) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(format!("{command}-{key}")))
    }

    /// Copies a verified hit into `out`; `None` on a miss or a stale entry.
    pub fn fetch(&self, command: &str, key: &str, out: &Path) -> anyhow::Result<Option<(Verdict, Vec<String>)>> {
        let Some(dir) = self.entry(command, key) else { return Ok(None) };
        let Ok(text) = std::fs::read(dir.join("manifest.json")) else { return Ok(None) };
        let Ok(manifest) = serde_json::from_slice::<Manifest>(&text) else { return Ok(None) };
        if manifest.key != key {
            return Ok(None);
        }
        let mut contents = Vec::with_capacity(manifest.files.len());
        for (name, sum) in &manifest.files {
            match std::fs::read(dir.join(name)) {
                Ok(bytes) if digest(&bytes) == *sum => contents.push((name.clone(), bytes)),
                _ => return Ok(None),
            }
        }
        std::fs::create_dir_all(out)?;
        for (name, bytes) in &contents {
            std::fs::write(out.join(name), bytes).with_context(|| format!("restoring {name}"))?;
        }
        Ok(Some((manifest.verdict, contents.into_iter().map(|(n, _)| n).collect())))
    }

    pub fn store(&self, command: &str, key: &str, out: &Path, files: &[String], verdict: Verdict) -> anyhow::Result<()> {
        let Some(dir) = self.entry(command, key) else { return Ok(()) };
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut sums = Vec::with_capacity(files.len());
        for name in files {
            let bytes = std::fs::read(out.join(name))?;
            std::fs::write(dir.join(name), &bytes)?;
            sums.push((name.clone(), digest(&bytes)));
        }
        let manifest = Manifest { key: key.to_string(), verdict, files: sums };
        std::fs::write(dir.join("manifest.json"), serde_json::to_vec_pretty(&manifest)?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampered_entries_are_ignored() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("out");
        std::fs::create_dir_all(&out).unwrap();
        std::fs::write(out.join("a.csv"), "x\n1\n").unwrap();
        let cache = Cache { root: Some(tmp.path().join("cache")) };
        cache.store("dim", "k1", &out, &["a.csv".into()], Verdict::Pass).unwrap();
        let again = tmp.path().join("again");
        let hit = cache.fetch("dim", "k1", &again).unwrap().unwrap();
        assert_eq!(hit.1, vec!["a.csv".to_string()]);
        assert_eq!(std::fs::read(again.join("a.csv")).unwrap(), b"x\n1\n");
        assert!(cache.fetch("dim", "k2", &again).unwrap().is_none());
        std::fs::write(tmp.path().join("cache/dim-k1/a.csv"), "x\n2\n").unwrap();
        assert!(cache.fetch("dim", "k1", &again).unwrap().is_none());
    }
}
