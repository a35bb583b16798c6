//! On-disk cache of dipoles and transition tables.
//!
//! Files live at `<dir>/<hash>.dip` or `<dir>/<hash>.tab`. Layout, all
//! little-endian:
//!
//! ```text
//! magic     8 bytes  "HHGCACHE"
//! version   u32      1
//! kind      u32      1 = dipole, 2 = transition table
//! hash      32 bytes SHA-256 of the physics key (see `cache_key`)
//! n_rows    u64      momenta (1 for a dipole)
//! n_cols    u64      time samples
//! grid      4 x f64  p_min, p_max, t_min, t_max (p_* zero for a dipole)
//! extra     u64      warm-up index (dipole) or 0
//! payload   f64...
//! ```
//!
//! A dipole payload is its `n_cols` samples. A table payload is three
//! blocks, each column-major in time (all momenta of one instant are
//! contiguous): `D` as interleaved (re, im), then `Delta r`, then `dD/dv`
//! as interleaved (re, im).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hhg_core::dipole::{DipoleRecord, TransitionTable};
use hhg_core::quad::Grid1D;
use hhg_core::{RunConfig, C64};
use ndarray::Array2;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MAGIC: &[u8; 8] = b"HHGCACHE";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 32 + 8 + 8 + 32 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dipole = 1,
    Table = 2,
}

impl Kind {
    fn extension(self) -> &'static str {
        match self {
            Kind::Dipole => "dip",
            Kind::Table => "tab",
        }
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cache file {path} is unusable: {reason}")]
    Corrupt { path: String, reason: String },
}

/// Content hash of everything that changes the cached numbers: the physics
/// fields of `config` plus a description of the sampling grid. Output paths,
/// `q`, `n_atoms` and other downstream keys are excluded.
pub fn cache_key(config: &RunConfig, kind: Kind, grid: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    let text = format!(
        "kind={:?};e0={:e};omega_l={:e};phase={:e};n_cycles={};ip={:e};kappa={:e};p_lim={:e};n_els={};grid={}",
        kind,
        config.e0,
        config.omega_l,
        config.phase,
        config.n_cycles,
        config.ip,
        config.kappa,
        config.p_lim,
        config.n_els,
        grid
    );
    h.update(text.as_bytes());
    h.finalize().into()
}

pub fn hex(hash: &[u8; 32]) -> String {
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Description of a uniform grid used in cache keys.
pub fn grid_tag(grid: &Grid1D) -> String {
    format!("{:e}:{:e}:{}", grid.min, grid.max, grid.n)
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

struct Header {
    kind: u32,
    hash: [u8; 32],
    n_rows: u64,
    n_cols: u64,
    grid: [f64; 4],
    extra: u64,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$HHG_CACHE_DIR`, else `./cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os("HHG_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| "cache".into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: Kind, hash: &[u8; 32]) -> PathBuf {
        self.dir.join(format!("{}.{}", hex(hash), kind.extension()))
    }

    pub fn store_dipole(&self, hash: &[u8; 32], record: &DipoleRecord) -> Result<PathBuf, CacheError> {
        let header = Header {
            kind: Kind::Dipole as u32,
            hash: *hash,
            n_rows: 1,
            n_cols: record.grid.n as u64,
            grid: [0.0, 0.0, record.grid.min, record.grid.max],
            extra: record.warmup_index as u64,
        };
        self.write(Kind::Dipole, &header, record.samples.iter().copied())
    }

    /// `Ok(None)` when absent. Corrupt or mismatched files are reported so the
    /// caller can recompute.
    pub fn load_dipole(&self, hash: &[u8; 32]) -> Result<Option<DipoleRecord>, CacheError> {
        let Some((header, payload, path)) = self.read(Kind::Dipole, hash)? else {
            return Ok(None);
        };
        let n = header.n_cols as usize;
        if header.n_rows != 1 || payload.len() != n || n < 2 {
            return Err(corrupt(&path, "dimensions do not match payload"));
        }
        let grid = Grid1D::new(header.grid[2], header.grid[3], n).map_err(|e| corrupt(&path, &e.to_string()))?;
        Ok(Some(DipoleRecord {
            grid,
            samples: payload,
            warmup_index: header.extra as usize,
        }))
    }

    pub fn store_table(&self, hash: &[u8; 32], table: &TransitionTable) -> Result<PathBuf, CacheError> {
        let (nv, nt) = (table.momenta.n, table.times.n);
        let header = Header {
            kind: Kind::Table as u32,
            hash: *hash,
            n_rows: nv as u64,
            n_cols: nt as u64,
            grid: [table.momenta.min, table.momenta.max, table.times.min, table.times.max],
            extra: 0,
        };
        let complex = |m: &Array2<C64>| {
            let cols = (0..nt).flat_map(move |j| (0..nv).map(move |i| (i, j)));
            cols.flat_map(move |(i, j)| [m[[i, j]].re, m[[i, j]].im]).collect::<Vec<_>>()
        };
        let mut data = complex(&table.d);
        data.extend((0..nt).flat_map(|j| (0..nv).map(move |i| table.dr[[i, j]])));
        data.extend(complex(&table.dd));
        self.write(Kind::Table, &header, data.into_iter())
    }

    pub fn load_table(&self, hash: &[u8; 32]) -> Result<Option<TransitionTable>, CacheError> {
        let Some((header, payload, path)) = self.read(Kind::Table, hash)? else {
            return Ok(None);
        };
        let (nv, nt) = (header.n_rows as usize, header.n_cols as usize);
        if payload.len() != 5 * nv * nt {
            return Err(corrupt(&path, "dimensions do not match payload"));
        }
        let grid_err = |e: hhg_core::Error| corrupt(&path, &e.to_string());
        let momenta = Grid1D::new(header.grid[0], header.grid[1], nv).map_err(grid_err)?;
        let times = Grid1D::new(header.grid[2], header.grid[3], nt).map_err(grid_err)?;
        let mut table = TransitionTable::zeros(momenta, times);
        let n = nv * nt;
        for j in 0..nt {
            for i in 0..nv {
                let k = j * nv + i;
                table.d[[i, j]] = C64::new(payload[2 * k], payload[2 * k + 1]);
                table.dr[[i, j]] = payload[2 * n + k];
                table.dd[[i, j]] = C64::new(payload[3 * n + 2 * k], payload[3 * n + 2 * k + 1]);
            }
        }
        Ok(Some(table))
    }

    fn write(&self, kind: Kind, header: &Header, payload: impl Iterator<Item = f64>) -> Result<PathBuf, CacheError> {
        let path = self.path(kind, &header.hash);
        let io = |source| CacheError::Io {
            path: path.display().to_string(),
            source,
        };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let mut bytes = Vec::with_capacity(HEADER_LEN);
        bytes.extend_from_slice(MAGIC);
        bytes.extend_from_slice(&VERSION.to_le_bytes());
        bytes.extend_from_slice(&header.kind.to_le_bytes());
        bytes.extend_from_slice(&header.hash);
        bytes.extend_from_slice(&header.n_rows.to_le_bytes());
        bytes.extend_from_slice(&header.n_cols.to_le_bytes());
        for g in header.grid {
            bytes.extend_from_slice(&g.to_le_bytes());
        }
        bytes.extend_from_slice(&header.extra.to_le_bytes());
        for x in payload {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        // write-then-rename so readers never see a partial file
        let tmp = path.with_extension(format!("{}.tmp", kind.extension()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(path)
    }

    fn read(&self, kind: Kind, hash: &[u8; 32]) -> Result<Option<(Header, Vec<f64>, PathBuf)>, CacheError> {
        let path = self.path(kind, hash);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => {
                return Err(CacheError::Io {
                    path: path.display().to_string(),
                    source,
                })
            }
        };
        if bytes.len() < HEADER_LEN || (bytes.len() - HEADER_LEN) % 8 != 0 {
            return Err(corrupt(&path, "truncated"));
        }
        if &bytes[..8] != MAGIC {
            return Err(corrupt(&path, "bad magic"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        if u32_at(8) != VERSION {
            return Err(corrupt(&path, "unsupported version"));
        }
        let header = Header {
            kind: u32_at(12),
            hash: bytes[16..48].try_into().unwrap(),
            n_rows: u64_at(48),
            n_cols: u64_at(56),
            grid: [f64_at(64), f64_at(72), f64_at(80), f64_at(88)],
            extra: u64_at(96),
        };
        if header.kind != kind as u32 {
            return Err(corrupt(&path, "wrong kind"));
        }
        if &header.hash != hash {
            return Err(corrupt(&path, "hash mismatch"));
        }
        let payload = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Some((header, payload, path)))
    }
}

fn corrupt(path: &Path, reason: &str) -> CacheError {
    CacheError::Corrupt {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

/// Result of a cached computation.
#[derive(Debug)]
pub struct Cached<T> {
    pub value: T,
    pub hash: [u8; 32],
    pub hit: bool,
    /// Why an existing file was discarded.
    pub discarded: Option<String>,
}

impl Cache {
    /// Loads the dipole for `hash`, or computes and stores it. Unusable
    /// files are replaced, never reused.
    pub fn dipole_or<E>(
        &self,
        hash: [u8; 32],
        enabled: bool,
        compute: impl FnOnce() -> Result<DipoleRecord, E>,
    ) -> Result<Cached<DipoleRecord>, E>
    where
        E: From<CacheError>,
    {
        let mut discarded = None;
        if enabled {
            match self.load_dipole(&hash) {
                Ok(Some(value)) => {
                    return Ok(Cached {
                        value,
                        hash,
                        hit: true,
                        discarded,
                    })
                }
                Ok(None) => {}
                Err(e) => discarded = Some(e.to_string()),
            }
        }
        let value = compute()?;
        if enabled {
            self.store_dipole(&hash, &value)?;
        }
        Ok(Cached {
            value,
            hash,
            hit: false,
            discarded,
        })
    }

    pub fn table_or<E>(
        &self,
        hash: [u8; 32],
        enabled: bool,
        compute: impl FnOnce() -> Result<TransitionTable, E>,
    ) -> Result<Cached<TransitionTable>, E>
    where
        E: From<CacheError>,
    {
        let mut discarded = None;
        if enabled {
            match self.load_table(&hash) {
                Ok(Some(value)) => {
                    return Ok(Cached {
                        value,
                        hash,
                        hit: true,
                        discarded,
                    })
                }
                Ok(None) => {}
                Err(e) => discarded = Some(e.to_string()),
            }
        }
        let value = compute()?;
        if enabled {
            self.store_table(&hash, &value)?;
        }
        Ok(Cached {
            value,
            hash,
            hit: false,
            discarded,
        })
    }
}
