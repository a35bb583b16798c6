//! Numerical engine for the quantum-optical description of high harmonic
//! generation in the strong-field approximation.
//!
//! The pipeline runs bottom-up: [`pulse`] supplies the closed-form field,
//! action and matrix elements; [`dipole`] integrates the time-dependent
//! dipole and the bound-continuum transition amplitudes; [`spectrum`],
//! [`coherence`], [`g2`] and [`manyatom`] reduce those to spectra and
//! field correlation functions. Everything is in atomic units.

pub mod coherence;
pub mod config;
pub mod dipole;
pub mod error;
pub mod fourier;
pub mod g2;
pub mod manyatom;
pub mod pulse;
pub mod quad;
pub mod spectrum;

pub use config::{derive, Constants, DerivedQuantities, RunConfig};
pub use error::{ConfigError, Error, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
