//! Golden-value files: a `# key: value` comment header followed by CSV.
//!
//! ```text
//! # quantity: g2_bruteforce
//! # config_hash: 3f5e...
//! # grid: n_t=24 n_v=40 q=11,13 tau_steps=0,6,12,17,23
//! # generated: hhg oracle 0.1.0
//! q,tau_over_t,re_t_cross,...
//! ```

use std::path::Path;

use thiserror::Error;

use crate::output::{write_csv, Cell, OutputError};

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("{path}: missing header key `{key}`")]
    MissingKey { path: String, key: &'static str },
    #[error("{path}: no column `{column}`")]
    MissingColumn { path: String, column: String },
    #[error(transparent)]
    Write(#[from] OutputError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRecord {
    pub quantity: String,
    pub config_hash: String,
    pub grid: String,
    pub generated: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl GoldenRecord {
    pub fn read(path: &Path) -> Result<Self, GoldenError> {
        let p = path.display().to_string();
        let read_err = |message: String| GoldenError::Read {
            path: p.clone(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| read_err(e.to_string()))?;
        let mut meta = std::collections::BTreeMap::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix('#') {
                Some(c) => {
                    if let Some((k, v)) = c.split_once(':') {
                        meta.insert(k.trim().to_string(), v.trim().to_string());
                    }
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut take = |key: &'static str| {
            meta.remove(key).ok_or(GoldenError::MissingKey { path: p.clone(), key })
        };
        let quantity = take("quantity")?;
        let config_hash = take("config_hash")?;
        let grid = take("grid")?;
        let generated = take("generated")?;
        let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns = reader
            .headers()
            .map_err(|e| read_err(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| read_err(e.to_string()))?;
            let row = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|e| read_err(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self {
            quantity,
            config_hash,
            grid,
            generated,
            columns,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, GoldenError> {
        let i = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| GoldenError::MissingColumn {
                path: self.quantity.clone(),
                column: name.to_string(),
            })?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write(&self, path: &Path) -> Result<(), GoldenError> {
        let comments = vec![
            format!("quantity: {}", self.quantity),
            format!("config_hash: {}", self.config_hash),
            format!("grid: {}", self.grid),
            format!("generated: {}", self.generated),
        ];
        let header: Vec<&str> = self.columns.iter().map(String::as_str).collect();
        let rows: Vec<Vec<Cell>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| Cell::Float(x)).collect())
            .collect();
        write_csv(path, &comments, &header, &rows)?;
        Ok(())
    }
}
