//! First-order correlation of one harmonic mode.
//!
//! In the quasi-stationary regime `G1(tau) = e^{-i w_q tau} G1(0)` with
//! `G1(0) = q^2 (|<d(w_q)>|^2 + int dv |F_v(w_q)|^2)`, the transforms taken
//! over the retained window.

use crate::config::RunConfig;
use crate::dipole::{DipoleRecord, FieldTrack, TransitionSource};
use crate::error::{Error, Result};
use crate::fourier::{single_frequency, SamplingWindow};
use crate::pulse::LaserField;
use crate::quad::{ordered_fold, Grid1D};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub q: u32,
    pub taus: Vec<f64>,
    pub coh: Vec<C64>,
    pub inc: Vec<C64>,
    pub total: Vec<C64>,
    pub normalized: Vec<C64>,
}

fn phase_series(weight: f64, omega: f64, taus: &[f64]) -> Vec<C64> {
    taus.iter().map(|&tau| C64::from_polar(weight, -omega * tau)).collect()
}

/// `q^2 |<d(w_q)>|^2` on the retained window.
pub fn coherent_weight(dipole: &DipoleRecord, config: &RunConfig, q: u32) -> Result<f64> {
    let window = SamplingWindow::retained(config);
    let spline = dipole.spline()?;
    let samples: Vec<f64> = window.times().iter().map(|&t| spline.eval(t)).collect();
    let omega = q as f64 * config.omega_l;
    Ok((q as f64).powi(2) * single_frequency(&samples, &window, omega).norm_sqr())
}

/// `q^2 int dv |F_v(w_q)|^2` on the retained window.
pub fn incoherent_weight<S: TransitionSource>(
    source: &S,
    laser: &LaserField,
    config: &RunConfig,
    q: u32,
) -> Result<f64> {
    let window = SamplingWindow::retained(config);
    let track = FieldTrack::new(laser, window.times());
    if !source.supports(&track.times) {
        return Err(Error::InvalidInput(
            "transition source is not sampled on the spectral window".into(),
        ));
    }
    let omega = q as f64 * config.omega_l;
    let weights = source.momenta().trapezoid_weights();
    let (sum, _) = ordered_fold(
        source.momenta().n,
        || (0.0, Vec::new()),
        |(acc, buf): &mut (f64, Vec<C64>), iv| {
            buf.resize(window.n, C64::default());
            source.fill_amplitudes(iv, &track, buf);
            *acc += weights[iv] * single_frequency(buf, &window, omega).norm_sqr();
        },
        |(a, _), (b, _)| *a += b,
    );
    Ok((q as f64).powi(2) * sum)
}

pub fn g1_coherent(dipole: &DipoleRecord, config: &RunConfig, q: u32, taus: &[f64]) -> Result<Vec<C64>> {
    let w = coherent_weight(dipole, config, q)?;
    Ok(phase_series(w, q as f64 * config.omega_l, taus))
}

pub fn g1_incoherent<S: TransitionSource>(
    source: &S,
    laser: &LaserField,
    config: &RunConfig,
    q: u32,
    taus: &[f64],
) -> Result<Vec<C64>> {
    let w = incoherent_weight(source, laser, config, q)?;
    Ok(phase_series(w, q as f64 * config.omega_l, taus))
}

/// `(G_coh + G_inc) / |G_coh(0) + G_inc(0)|`.
pub fn g1_normalized(coh: &[C64], inc: &[C64]) -> Result<Vec<C64>> {
    if coh.len() != inc.len() || coh.is_empty() {
        return Err(Error::InvalidInput("g1 series must be non-empty and of equal length".into()));
    }
    let norm = (coh[0] + inc[0]).norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Degenerate("harmonic carries no intensity".into()));
    }
    Ok(coh.iter().zip(inc).map(|(c, i)| (c + i) / norm).collect())
}

pub fn g1_series<S: TransitionSource>(
    dipole: &DipoleRecord,
    source: &S,
    laser: &LaserField,
    config: &RunConfig,
    q: u32,
    taus: &[f64],
) -> Result<CorrelationSeries> {
    let coh = g1_coherent(dipole, config, q, taus)?;
    let inc = g1_incoherent(source, laser, config, q, taus)?;
    let normalized = g1_normalized(&coh, &inc)?;
    let total = coh.iter().zip(&inc).map(|(a, b)| a + b).collect();
    Ok(CorrelationSeries {
        q,
        taus: taus.to_vec(),
        coh,
        inc,
        total,
        normalized,
    })
}

/// Build-up of the mode intensity,
/// `q^2 (|int_{t0}^{t} e^{-i w t1} <d(t1)> dt1|^2 + int dv |int_{t0}^{t} e^{-i w t1} D_v(t1) dt1|^2)`,
/// by trapezoid on `grid` (which starts at `t0`) for every upper limit in
/// `upto` (grid indices).
pub fn g1_equal_time<S: TransitionSource>(
    dipole: &[f64],
    source: &S,
    laser: &LaserField,
    grid: &Grid1D,
    omega_l: f64,
    q: u32,
    upto: &[usize],
) -> Result<Vec<f64>> {
    let times = grid.points();
    if dipole.len() != grid.n || !source.supports(&times) {
        return Err(Error::InvalidInput("inputs are not sampled on the time grid".into()));
    }
    if let Some(&bad) = upto.iter().find(|&&j| j >= grid.n) {
        return Err(Error::InvalidInput(format!("index {bad} outside the time grid")));
    }
    let omega = q as f64 * omega_l;
    let h = grid.spacing();
    let phasor: Vec<C64> = times.iter().map(|&t| C64::from_polar(1.0, -omega * t)).collect();
    let running = |x: &mut dyn Iterator<Item = C64>| -> Vec<C64> {
        let mut out = Vec::with_capacity(grid.n);
        let mut acc = C64::default();
        let mut prev: Option<C64> = None;
        for v in x {
            if let Some(p) = prev {
                acc += 0.5 * h * (p + v);
            }
            out.push(acc);
            prev = Some(v);
        }
        out
    };
    let coh = running(&mut dipole.iter().zip(&phasor).map(|(d, e)| e * *d));
    let track = FieldTrack::new(laser, times);
    let weights = source.momenta().trapezoid_weights();
    let n_out = upto.len();
    let (inc, _) = ordered_fold(
        source.momenta().n,
        || (vec![0.0; n_out], Vec::new()),
        |(acc, buf): &mut (Vec<f64>, Vec<C64>), iv| {
            buf.resize(grid.n, C64::default());
            source.fill_amplitudes(iv, &track, buf);
            let f = running(&mut buf.iter().zip(&phasor).map(|(d, e)| d * e));
            for (a, &j) in acc.iter_mut().zip(upto) {
                *a += weights[iv] * f[j].norm_sqr();
            }
        },
        |(a, _), (b, _)| crate::quad::add_assign(a, &b),
    );
    let q2 = (q as f64).powi(2);
    Ok(upto
        .iter()
        .zip(&inc)
        .map(|(&j, i)| q2 * (coh[j].norm_sqr() + i))
        .collect())
}
