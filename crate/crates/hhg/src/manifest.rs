//! Run manifest written next to every command's outputs.
//!
//! The `[config]` section is a complete config file, so
//! `hhg <command> --config manifest.toml` replays the run.

use std::path::{Path, PathBuf};
use std::time::Duration;

use hhg_core::RunConfig;
use toml::{Table, Value};

use crate::configfile::render;
use crate::output::OutputError;

pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub name: String,
    pub hash: String,
    pub hit: bool,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    /// Command options other than the config keys (`q`, `n_atoms` list, ...).
    pub options: Vec<(String, String)>,
    pub config: RunConfig,
    pub caches: Vec<CacheEntry>,
    pub timings: Vec<(String, Duration)>,
    pub outputs: Vec<PathBuf>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            options: Vec::new(),
            config,
            caches: Vec::new(),
            timings: Vec::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_toml(&self) -> String {
        let mut root = Table::new();
        root.insert("tool_version".into(), Value::String(self.tool_version.clone()));
        root.insert("command".into(), Value::String(self.command.clone()));
        let options: Table = self
            .options
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        root.insert("options".into(), Value::Table(options));
        let config: Table = render(&self.config).parse().expect("rendered config is valid toml");
        root.insert("config".into(), Value::Table(config));
        let caches: Table = self
            .caches
            .iter()
            .map(|c| {
                let mut t = Table::new();
                t.insert("hash".into(), Value::String(c.hash.clone()));
                t.insert("hit".into(), Value::Boolean(c.hit));
                (c.name.clone(), Value::Table(t))
            })
            .collect();
        root.insert("cache".into(), Value::Table(caches));
        let timings: Table = self
            .timings
            .iter()
            .map(|(k, d)| (k.clone(), Value::Float(d.as_secs_f64())))
            .collect();
        root.insert("timings_s".into(), Value::Table(timings));
        let outputs = self
            .outputs
            .iter()
            .map(|p| Value::String(p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()))
            .collect();
        root.insert("outputs".into(), Value::Array(outputs));
        if !self.notes.is_empty() {
            root.insert(
                "notes".into(),
                Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
            );
        }
        toml::to_string(&root).expect("manifest serializes")
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, OutputError> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_toml()).map_err(|e| OutputError::Write {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Ok(path)
    }
}
