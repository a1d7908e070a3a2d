use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use crate::config::Config;

/// Outcome class of a command, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// Nothing was violated but some results carry a warning.
    Advisory,
    /// A bound was violated.
    Violation,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Advisory => 0,
            Verdict::Violation => 1,
        }
    }
}

/// Files written by one command run, in write order.
pub struct Outputs {
    dir: PathBuf,
    command: &'static str,
    hash: String,
    header: Vec<String>,
    pub files: Vec<String>,
}

impl Outputs {
    pub fn new(dir: &Path, command: &'static str, config: &Config) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let hash = config.hash(command);
        let mut header = vec![format!("command = {command}"), format!("config_hash = {hash}")];
        if config.coarse {
            header.push("resolution = coarse".into());
        }
        header.extend(config.header_lines());
        Ok(Self { dir: dir.to_path_buf(), command, hash, header, files: Vec::new() })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn command(&self) -> &'static str {
        self.command
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// CSV with the resolved configuration as leading `#` lines.
    pub fn csv<R: Serialize>(&mut self, name: &str, header: &[&str], rows: &[R]) -> anyhow::Result<()> {
        let mut out = Vec::new();
        for line in &self.header {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        out.extend(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?);
        self.write(name, &out)
    }

    /// Pretty JSON object with `config` and `config_hash` fields added.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T, config: &Config) -> anyhow::Result<()> {
        let mut v = serde_json::to_value(value)?;
        if let Some(map) = v.as_object_mut() {
            map.insert("command".into(), self.command.into());
            map.insert("config_hash".into(), self.hash.clone().into());
            map.insert("config".into(), serde_json::to_value(config)?);
        }
        let mut bytes = serde_json::to_vec_pretty(&v)?;
        bytes.push(b'\n');
        self.write(name, &bytes)
    }

    pub fn text(&mut self, name: &str, body: &str) -> anyhow::Result<()> {
        self.write(name, body.as_bytes())
    }
}

/// Finite floats as-is; non-finite ones as strings so JSON stays valid.
pub fn json_f64(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map(Into::into).unwrap_or_else(|| x.to_string().into())
}
