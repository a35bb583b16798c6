//! Run configuration, fixed constants and derived quantities.

use std::f64::consts::PI;

use crate::error::{ConfigError, FieldError};

/// Prefactors absorbed into arbitrary units. They never enter the
/// normalized correlation functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants;

impl Constants {
    pub const HBAR: f64 = 1.0;
    pub const COUPLING: f64 = 1.0;
    pub const ETA: f64 = 1.0;
}

/// Complete description of one run. Every field maps to a config-file key of
/// the same name.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub e0: f64,
    pub omega_l: f64,
    pub phase: f64,
    pub n_cycles: u32,
    pub ip: f64,
    pub kappa: f64,
    pub p_lim: f64,
    pub n_els: usize,
    pub n_t: usize,
    pub n_fft: usize,
    pub warmup_cycles: u32,
    pub q: u32,
    pub tau_samples: usize,
    pub n_atoms: u64,
}

/// Momentum grid used for second-order quantities.
pub const G2_P_LIM: f64 = 5.0;
pub const G2_N_ELS: usize = 2500;

impl Default for RunConfig {
    /// Paper parameters with the first-order momentum grid.
    fn default() -> Self {
        let omega_l = 0.057;
        let n_cycles = 8;
        let ip = 0.5;
        Self {
            e0: 0.053,
            omega_l,
            phase: 0.0,
            n_cycles,
            ip,
            kappa: (ip / 2.0).sqrt(),
            p_lim: 3.0,
            n_els: 2000,
            n_t: default_n_t(omega_l, n_cycles),
            n_fft: 10_000,
            warmup_cycles: 1,
            q: 11,
            tau_samples: 100,
            n_atoms: 1,
        }
    }
}

/// Two samples per atomic unit of time over the pulse, i.e. 2*ceil(16 pi/w)
/// for eight cycles.
pub fn default_n_t(omega_l: f64, n_cycles: u32) -> usize {
    2 * (2.0 * PI * n_cycles as f64 / omega_l).ceil() as usize
}

impl RunConfig {
    /// Paper parameters with the wider momentum grid needed by g2.
    pub fn paper_g2() -> Self {
        Self {
            p_lim: G2_P_LIM,
            n_els: G2_N_ELS,
            ..Self::default()
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_l
    }

    pub fn duration(&self) -> f64 {
        self.n_cycles as f64 * self.period()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut fields = Vec::new();
        let mut bad = |key: &'static str, reason: &str| {
            fields.push(FieldError {
                key,
                reason: reason.to_string(),
            })
        };
        if !(self.e0.is_finite() && self.e0 >= 0.0) {
            bad("e0", "must be finite and non-negative");
        }
        if !(self.omega_l.is_finite() && self.omega_l > 0.0) {
            bad("omega_l", "must be finite and positive");
        }
        if !self.phase.is_finite() {
            bad("phase", "must be finite");
        }
        if self.n_cycles == 0 {
            bad("n_cycles", "must be at least 1");
        }
        if !(self.ip.is_finite() && self.ip > 0.0) {
            bad("ip", "must be finite and positive");
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            bad("kappa", "must be finite and positive");
        }
        if !(self.p_lim.is_finite() && self.p_lim > 0.0) {
            bad("p_lim", "must be finite and positive");
        }
        if self.n_els < 2 {
            bad("n_els", "must be at least 2");
        }
        if self.n_t < 2 {
            bad("n_t", "must be at least 2");
        }
        if self.n_fft < self.n_t {
            bad("n_fft", "must be at least n_t");
        }
        if self.warmup_cycles >= self.n_cycles {
            bad("warmup_cycles", "must be smaller than n_cycles");
        }
        if self.q == 0 {
            bad("q", "must be at least 1");
        }
        if self.tau_samples < 2 {
            bad("tau_samples", "must be at least 2");
        }
        if self.n_atoms == 0 {
            bad("n_atoms", "must be at least 1");
        }
        if fields.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { fields })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Optical period T = 2 pi / w.
    pub period: f64,
    pub duration: f64,
    /// w_q = q w for the configured harmonic.
    pub omega_q: f64,
    /// Ponderomotive energy E0^2 / (4 w^2).
    pub up: f64,
    /// (Ip + 3.17 Up) / w.
    pub cutoff_order: f64,
}

pub fn derive(config: &RunConfig) -> Result<DerivedQuantities, ConfigError> {
    config.validate()?;
    let w = config.omega_l;
    let up = config.e0 * config.e0 / (4.0 * w * w);
    Ok(DerivedQuantities {
        period: config.period(),
        duration: config.duration(),
        omega_q: config.q as f64 * w,
        up,
        cutoff_order: (config.ip + 3.17 * up) / w,
    })
}
