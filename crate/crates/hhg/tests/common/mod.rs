//! Configurations and comparisons shared by the golden-file and acceptance
//! tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hhg::cache::hex;
use hhg::configfile::render;
use hhg::golden::GoldenRecord;
use hhg_core::config::default_n_t;
use hhg_core::RunConfig;
use sha2::{Digest, Sha256};

pub const GENERATED_BY: &str = "hhg oracle 0.1.0";

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden(name: &str) -> GoldenRecord {
    let path = golden_dir().join(name);
    GoldenRecord::read(&path).unwrap_or_else(|e| panic!("{e}"))
}

pub fn config_hash(config: &RunConfig) -> String {
    hex(&Sha256::digest(render(config).as_bytes()).into())
}

/// Two cycles, 200 momenta.
pub fn dipole_config() -> RunConfig {
    RunConfig {
        n_cycles: 2,
        n_els: 200,
        n_t: default_n_t(0.057, 2),
        n_fft: 2000,
        ..RunConfig::default()
    }
}

/// 50 momenta x 100 instants over the full pulse.
pub fn table_config() -> RunConfig {
    RunConfig {
        n_els: 50,
        n_t: 100,
        ..RunConfig::default()
    }
}

/// Paper parameters on the first-order grid.
pub fn g1_config() -> RunConfig {
    RunConfig::default()
}

/// Coarse second-order grid: 24 samples per window, 40 momenta, 5 delays.
pub fn g2_config() -> RunConfig {
    RunConfig {
        p_lim: hhg_core::config::G2_P_LIM,
        n_els: 40,
        n_t: 24,
        tau_samples: 5,
        ..RunConfig::default()
    }
}

/// No drive, 20 samples per window, 16 momenta.
pub fn field_free_config() -> RunConfig {
    RunConfig {
        e0: 0.0,
        p_lim: hhg_core::config::G2_P_LIM,
        n_els: 16,
        n_t: 20,
        tau_samples: 5,
        ..RunConfig::default()
    }
}

pub const G2_ORDERS: [u32; 2] = [11, 13];

pub fn g2_golden_name(q: u32) -> String {
    format!("g2_bruteforce_q{q}.csv")
}

pub const FIELD_FREE_GOLDEN: &str = "g2_bruteforce_field_free.csv";
pub const DIPOLE_GOLDEN: &str = "dipole_coarse.csv";
pub const TABLE_GOLDEN: &str = "table_norms.csv";
pub const G1_GOLDEN: &str = "g1_q11.csv";

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `(max_i |a_i - b_i| / max|b|, rms(a - b) / rms(b))`.
pub fn series_err(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let max = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale;
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (max, (num / den).sqrt())
}
