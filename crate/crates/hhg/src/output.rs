//! CSV emission and bookkeeping of written files.

use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("refusing to write {0}: no data")]
    Empty(String),
}

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

/// 17 significant digits, round-trip safe and locale independent.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // keep the sign of zero out of golden files
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Writes `header` and `rows` as CSV with `\n` line endings. Lines in
/// `comments` are emitted first, each prefixed with `# `.
pub fn write_csv(path: &Path, comments: &[String], header: &[&str], rows: &[Vec<Cell>]) -> Result<(), OutputError> {
    let err = |message: String| OutputError::Write {
        path: path.display().to_string(),
        message,
    };
    let mut buf = Vec::new();
    for c in comments {
        buf.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        w.write_record(header).map_err(|e| err(e.to_string()))?;
        for row in rows {
            if row.len() != header.len() {
                return Err(err(format!("row has {} fields, header {}", row.len(), header.len())));
            }
            w.write_record(row.iter().map(Cell::render)).map_err(|e| err(e.to_string()))?;
        }
        w.flush().map_err(|e| err(e.to_string()))?;
    }
    std::fs::write(path, buf).map_err(|e| err(e.to_string()))
}

/// Files produced by one command; removed again if the command fails.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<PathBuf>,
    committed: bool,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, path: PathBuf) -> PathBuf {
        self.files.push(path.clone());
        path
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.files)
    }
}

impl Drop for OutputSet {
    fn drop(&mut self) {
        if !self.committed {
            for f in &self.files {
                let _ = std::fs::remove_file(f);
            }
        }
    }
}
