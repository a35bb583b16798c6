//! Time-dependent dipole `<d(t)>` and the bound-continuum transition
//! amplitudes `D_v(t) = <v|d(t)|g> = e^{i S(v,t,t0)} d(v + A(t))`.

use ndarray::Array2;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fourier::CubicSpline;
use crate::pulse::{
    dipole_matrix_element, dipole_matrix_element_dp, phase_from_start, AtomSpec, FieldSample,
    LaserField,
};
use crate::quad::{adaptive_quad, add_assign, ordered_fold, Grid1D};
use crate::C64;

/// Absolute tolerance per time panel of the ionization integral.
pub const PANEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DipoleRecord {
    pub grid: Grid1D,
    pub samples: Vec<f64>,
    /// First grid index at or after the end of the warm-up cycles.
    pub warmup_index: usize,
}

impl DipoleRecord {
    pub fn retained(&self) -> &[f64] {
        &self.samples[self.warmup_index..]
    }

    pub fn spline(&self) -> Result<CubicSpline<f64>> {
        CubicSpline::new(self.grid, self.samples.clone())
    }
}

/// Field quantities precomputed on a list of instants.
#[derive(Debug, Clone)]
pub struct FieldTrack {
    pub times: Vec<f64>,
    pub fields: Vec<FieldSample>,
}

impl FieldTrack {
    pub fn new(laser: &LaserField, times: Vec<f64>) -> Self {
        let fields = times.iter().map(|&t| laser.sample(t)).collect();
        Self { times, fields }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Momentum grid of the pulse/atom pair used for all momentum integrals.
pub fn momentum_grid(config: &RunConfig) -> Result<Grid1D> {
    Grid1D::new(-config.p_lim, config.p_lim, config.n_els)
}

pub fn time_grid(config: &RunConfig) -> Result<Grid1D> {
    Grid1D::new(0.0, config.duration(), config.n_t)
}

pub fn compute_dipole(config: &RunConfig) -> Result<DipoleRecord> {
    config.validate()?;
    let laser = LaserField::from_config(config);
    let atom = AtomSpec::from_config(config);
    let grid = time_grid(config)?;
    let samples = compute_dipole_on(&laser, &atom, &momentum_grid(config)?, &grid)?;
    let t_warm = config.warmup_cycles as f64 * config.period();
    let warmup_index = (0..grid.n)
        .find(|&i| grid.point(i) >= t_warm - 1e-9 * config.period())
        .unwrap_or(grid.n);
    Ok(DipoleRecord {
        grid,
        samples,
        warmup_index,
    })
}

/// `<d(t)> = int dp 2 Re[i conj(d(p+A(t))) e^{-i Phi(p,t)} C(p,t)]` with
/// `C(p,t) = int_{t_start}^t e^{i Phi(p,t1)} E(t1) d(p+A(t1)) dt1`, where
/// `Phi(p,t) = S(p,t,t_start)`.
///
/// `C` is accumulated panel by panel along `times`, so each momentum costs
/// one adaptive integral over the whole grid rather than one per instant.
pub fn compute_dipole_on(
    laser: &LaserField,
    atom: &AtomSpec,
    momenta: &Grid1D,
    times: &Grid1D,
) -> Result<Vec<f64>> {
    let weights = momenta.trapezoid_weights();
    let track = FieldTrack::new(laser, times.points());
    let n_t = times.n;
    let (acc, err) = ordered_fold(
        momenta.n,
        || (vec![0.0; n_t], None::<Error>),
        |(acc, err), ip| {
            if err.is_some() {
                return;
            }
            match dipole_row(laser, atom, momenta.point(ip), &track) {
                Ok(mut row) => {
                    row.iter_mut().for_each(|x| *x *= weights[ip]);
                    add_assign(acc, &row);
                }
                Err(e) => *err = Some(e),
            }
        },
        |(a, ea), (b, eb)| {
            if ea.is_none() {
                *ea = eb;
            }
            add_assign(a, &b);
        },
    );
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

fn dipole_row(laser: &LaserField, atom: &AtomSpec, p: f64, track: &FieldTrack) -> Result<Vec<f64>> {
    let integrand = |t1: f64| {
        let f = laser.sample(t1);
        let phi = phase_from_start(p, t1, &f, laser, atom.ip);
        C64::from_polar(f.e, phi) * dipole_matrix_element(p + f.a, atom)
    };
    let mut c = C64::default();
    let mut prev = laser.t_start;
    let mut row = Vec::with_capacity(track.len());
    for (&t, f) in track.times.iter().zip(&track.fields) {
        let lo = prev.max(laser.t_start);
        let hi = t.min(laser.t_end);
        if hi > lo {
            let panel = adaptive_quad(integrand, lo, hi, PANEL_TOL).map_err(|e| Error::Quadrature {
                p,
                t,
                estimate: e.value,
                error: e.error,
            })?;
            c += panel.value;
        }
        prev = prev.max(t);
        let phi = phase_from_start(p, t, f, laser, atom.ip);
        let d = dipole_matrix_element(p + f.a, atom);
        let z = C64::i() * d.conj() * C64::from_polar(1.0, -phi) * c;
        row.push(2.0 * z.re);
    }
    Ok(row)
}

/// Rows of transition amplitudes for each momentum of a grid.
pub trait TransitionSource: Sync {
    fn momenta(&self) -> &Grid1D;

    /// Whether rows can be produced on these instants.
    fn supports(&self, times: &[f64]) -> bool;

    /// `D_v(t)` for momentum index `iv`.
    fn fill_amplitudes(&self, iv: usize, track: &FieldTrack, d: &mut [C64]);

    /// `D_v(t)`, `Delta r(v,t,t0)` and `d/dv D_v(t)`.
    fn fill_row(&self, iv: usize, track: &FieldTrack, row: &mut TransitionRow);
}

/// Scratch for one momentum row.
#[derive(Debug, Clone, Default)]
pub struct TransitionRow {
    pub d: Vec<C64>,
    pub dr: Vec<f64>,
    pub dd: Vec<C64>,
}

impl TransitionRow {
    pub fn with_len(n: usize) -> Self {
        Self {
            d: vec![C64::default(); n],
            dr: vec![0.0; n],
            dd: vec![C64::default(); n],
        }
    }
}

/// Closed-form transition amplitudes, evaluable at any instant.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    pub laser: LaserField,
    pub atom: AtomSpec,
    pub momenta: Grid1D,
}

impl TransitionModel {
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            laser: LaserField::from_config(config),
            atom: AtomSpec::from_config(config),
            momenta: momentum_grid(config)?,
        })
    }

    pub fn t0(&self) -> f64 {
        self.laser.t_start
    }

    /// Materializes the model on a time grid.
    pub fn table(&self, times: &Grid1D) -> TransitionTable {
        let track = FieldTrack::new(&self.laser, times.points());
        let (nv, nt) = (self.momenta.n, times.n);
        let mut table = TransitionTable::zeros(self.momenta, *times);
        let mut row = TransitionRow::with_len(nt);
        for iv in 0..nv {
            self.fill_row(iv, &track, &mut row);
            for j in 0..nt {
                table.d[[iv, j]] = row.d[j];
                table.dr[[iv, j]] = row.dr[j];
                table.dd[[iv, j]] = row.dd[j];
            }
        }
        table
    }

    #[inline]
    fn amplitude(&self, v: f64, t: f64, f: &FieldSample) -> (C64, C64) {
        let phase = C64::from_polar(1.0, phase_from_start(v, t, f, &self.laser, self.atom.ip));
        (phase, phase * dipole_matrix_element(v + f.a, &self.atom))
    }
}

impl TransitionSource for TransitionModel {
    fn momenta(&self) -> &Grid1D {
        &self.momenta
    }

    fn supports(&self, _times: &[f64]) -> bool {
        true
    }

    fn fill_amplitudes(&self, iv: usize, track: &FieldTrack, d: &mut [C64]) {
        let v = self.momenta.point(iv);
        for ((out, &t), f) in d.iter_mut().zip(&track.times).zip(&track.fields) {
            *out = self.amplitude(v, t, f).1;
        }
    }

    fn fill_row(&self, iv: usize, track: &FieldTrack, row: &mut TransitionRow) {
        let v = self.momenta.point(iv);
        let t0 = self.t0();
        let a_int0 = self.laser.sample(t0).a_int;
        for (j, (&t, f)) in track.times.iter().zip(&track.fields).enumerate() {
            let (phase, d) = self.amplitude(v, t, f);
            let dr = v * (t - t0) + f.a_int - a_int0;
            row.d[j] = d;
            row.dr[j] = dr;
            row.dd[j] = C64::new(0.0, dr) * d + phase * dipole_matrix_element_dp(v + f.a, &self.atom);
        }
    }
}

/// Transition amplitudes sampled on a (momentum x time) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    pub momenta: Grid1D,
    pub times: Grid1D,
    pub d: Array2<C64>,
    pub dr: Array2<f64>,
    pub dd: Array2<C64>,
}

impl TransitionTable {
    pub fn zeros(momenta: Grid1D, times: Grid1D) -> Self {
        let shape = (momenta.n, times.n);
        Self {
            momenta,
            times,
            d: Array2::zeros(shape),
            dr: Array2::zeros(shape),
            dd: Array2::zeros(shape),
        }
    }

    /// Root-mean-square of `|D_v(t)|` over time for each momentum.
    pub fn row_norms(&self) -> Vec<f64> {
        self.d
            .rows()
            .into_iter()
            .map(|r| (r.iter().map(|z| z.norm_sqr()).sum::<f64>() / r.len() as f64).sqrt())
            .collect()
    }
}

pub fn compute_transition_table(config: &RunConfig) -> Result<TransitionTable> {
    Ok(TransitionModel::from_config(config)?.table(&time_grid(config)?))
}

impl TransitionSource for TransitionTable {
    fn momenta(&self) -> &Grid1D {
        &self.momenta
    }

    fn supports(&self, times: &[f64]) -> bool {
        let h = self.times.spacing();
        times.len() == self.times.n
            && times
                .iter()
                .enumerate()
                .all(|(j, &t)| (t - self.times.point(j)).abs() <= 1e-9 * h)
    }

    fn fill_amplitudes(&self, iv: usize, _track: &FieldTrack, d: &mut [C64]) {
        for (out, x) in d.iter_mut().zip(self.d.row(iv)) {
            *out = *x;
        }
    }

    fn fill_row(&self, iv: usize, _track: &FieldTrack, row: &mut TransitionRow) {
        for j in 0..self.times.n {
            row.d[j] = self.d[[iv, j]];
            row.dr[j] = self.dr[[iv, j]];
            row.dd[j] = self.dd[[iv, j]];
        }
    }
}
