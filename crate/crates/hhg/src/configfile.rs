//! Flat `key = value` configuration files.
//!
//! Every [`RunConfig`] field is a key. Missing keys take the paper defaults;
//! `n_t` follows `n_cycles` and `omega_l` unless given, and g2-type runs use
//! the wider momentum grid unless `p_lim`/`n_els` are set. A run manifest is
//! accepted too, its `[config]` table being read.

use std::path::Path;

use hhg_core::config::{default_n_t, G2_N_ELS, G2_P_LIM};
use hhg_core::{ConfigError, RunConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Invalid(#[from] ConfigError),
}

/// Keys present in a file or given on the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub e0: Option<f64>,
    pub omega_l: Option<f64>,
    pub phase: Option<f64>,
    pub n_cycles: Option<u32>,
    pub ip: Option<f64>,
    pub kappa: Option<f64>,
    pub p_lim: Option<f64>,
    pub n_els: Option<usize>,
    pub n_t: Option<usize>,
    pub n_fft: Option<usize>,
    pub warmup_cycles: Option<u32>,
    pub q: Option<u32>,
    pub tau_samples: Option<usize>,
    pub n_atoms: Option<u64>,
}

/// Which default momentum grid applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    FirstOrder,
    SecondOrder,
}

impl PartialConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigFileError> {
        let parse_err = |message: String| ConfigFileError::Parse {
            path: origin.to_string(),
            message,
        };
        let mut value: toml::Table = text.parse().map_err(|e: toml::de::Error| parse_err(e.to_string()))?;
        if let Some(toml::Value::Table(inner)) = value.remove("config") {
            value = inner;
        } else {
            // manifests carry other sections; plain config files have none
            value.retain(|_, v| !v.is_table());
        }
        PartialConfig::deserialize(toml::Value::Table(value)).map_err(|e| parse_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Keys set in `other` win.
    pub fn overlay(mut self, other: &PartialConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(e0, omega_l, phase, n_cycles, ip, kappa, p_lim, n_els, n_t, n_fft, warmup_cycles, q, tau_samples, n_atoms);
        self
    }

    pub fn resolve(&self, stage: Stage) -> Result<RunConfig, ConfigFileError> {
        let base = match stage {
            Stage::FirstOrder => RunConfig::default(),
            Stage::SecondOrder => RunConfig::paper_g2(),
        };
        let omega_l = self.omega_l.unwrap_or(base.omega_l);
        let n_cycles = self.n_cycles.unwrap_or(base.n_cycles);
        let config = RunConfig {
            e0: self.e0.unwrap_or(base.e0),
            omega_l,
            phase: self.phase.unwrap_or(base.phase),
            n_cycles,
            ip: self.ip.unwrap_or(base.ip),
            kappa: self.kappa.unwrap_or(base.kappa),
            p_lim: self.p_lim.unwrap_or(match stage {
                Stage::FirstOrder => base.p_lim,
                Stage::SecondOrder => G2_P_LIM,
            }),
            n_els: self.n_els.unwrap_or(match stage {
                Stage::FirstOrder => base.n_els,
                Stage::SecondOrder => G2_N_ELS,
            }),
            n_t: self.n_t.unwrap_or_else(|| default_n_t(omega_l, n_cycles)),
            n_fft: self.n_fft.unwrap_or(base.n_fft),
            warmup_cycles: self.warmup_cycles.unwrap_or(base.warmup_cycles),
            q: self.q.unwrap_or(base.q),
            tau_samples: self.tau_samples.unwrap_or(base.tau_samples),
            n_atoms: self.n_atoms.unwrap_or(base.n_atoms),
        };
        config.validate()?;
        Ok(config)
    }
}

/// Fully specified file text for `config`, readable by [`PartialConfig::parse`].
pub fn render(config: &RunConfig) -> String {
    let full = PartialConfig {
        e0: Some(config.e0),
        omega_l: Some(config.omega_l),
        phase: Some(config.phase),
        n_cycles: Some(config.n_cycles),
        ip: Some(config.ip),
        kappa: Some(config.kappa),
        p_lim: Some(config.p_lim),
        n_els: Some(config.n_els),
        n_t: Some(config.n_t),
        n_fft: Some(config.n_fft),
        warmup_cycles: Some(config.warmup_cycles),
        q: Some(config.q),
        tau_samples: Some(config.tau_samples),
        n_atoms: Some(config.n_atoms),
    };
    toml::to_string(&full).expect("flat config always serializes")
}
