use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One rejected configuration key.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub key: &'static str,
    pub reason: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.reason)
    }
}

/// Validation failure listing every offending key, not just the first.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigError {
    pub fields: Vec<FieldError>,
}

impl ConfigError {
    pub fn keys(&self) -> Vec<&'static str> {
        self.fields.iter().map(|f| f.key).collect()
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration")?;
        for (i, field) in self.fields.iter().enumerate() {
            let sep = if i == 0 { ": " } else { "; " };
            write!(f, "{sep}{field}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(
        "quadrature did not converge at p = {p}, t = {t}: best estimate {estimate}, error {error:e}"
    )]
    Quadrature {
        p: f64,
        t: f64,
        estimate: num_complex::Complex64,
        error: f64,
    },

    #[error("degenerate mode: {0}")]
    Degenerate(String),

    #[error("refused: {0}")]
    Guard(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
