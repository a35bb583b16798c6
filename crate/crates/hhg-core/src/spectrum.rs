//! Coherent, incoherent and total HHG spectra on the retained window.

use crate::config::RunConfig;
use crate::dipole::{DipoleRecord, FieldTrack, TransitionSource};
use crate::error::{Error, Result};
use crate::fourier::{resample_fft, single_frequency, FourierSeries, ForwardTransform, SamplingWindow};
use crate::pulse::LaserField;
use crate::quad::{add_assign, ordered_fold};
use crate::C64;

/// Incoherent density of one momentum, `q^2 |F_v(w)|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSlice {
    pub index: usize,
    pub v: f64,
    pub s: Vec<f64>,
}

/// Spectral densities per FFT bin on the non-negative frequency half.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub orders: Vec<f64>,
    pub s_coh: Vec<f64>,
    pub s_inc: Vec<f64>,
    pub s_total: Vec<f64>,
    pub slices: Vec<MomentumSlice>,
}

impl SpectrumResult {
    pub fn new(orders: Vec<f64>, s_coh: Vec<f64>, s_inc: Vec<f64>, slices: Vec<MomentumSlice>) -> Self {
        let s_total = s_coh.iter().zip(&s_inc).map(|(a, b)| a + b).collect();
        Self {
            orders,
            s_coh,
            s_inc,
            s_total,
            slices,
        }
    }

    /// Bin nearest to harmonic order `q`.
    pub fn bin_of(&self, q: f64) -> usize {
        let step = self.orders.get(1).copied().unwrap_or(1.0);
        ((q / step).round().max(0.0) as usize).min(self.orders.len() - 1)
    }
}

fn positive_orders(window: &SamplingWindow, omega_l: f64) -> Vec<f64> {
    (0..window.n.div_ceil(2)).map(|k| window.bin_omega(k) / omega_l).collect()
}

/// Transform of the retained part of `<d(t)>`.
pub fn dipole_transform(dipole: &DipoleRecord, config: &RunConfig) -> Result<FourierSeries> {
    resample_fft(&dipole.grid, &dipole.samples, SamplingWindow::retained(config), config.omega_l)
}

/// `S_coh = q^2 |<d(w)>|^2` per bin.
pub fn coherent_spectrum(dipole: &DipoleRecord, config: &RunConfig) -> Result<Vec<f64>> {
    let series = dipole_transform(dipole, config)?;
    Ok((0..series.positive_len())
        .map(|k| series.orders[k].powi(2) * series.amplitudes[k].norm_sqr())
        .collect())
}

/// `S_inc = q^2 int dv |F_v(w)|^2` per bin, `F_v` being the transform of
/// `D_v(t)` over the retained window. Rows listed in `slices` are also
/// returned individually.
pub fn incoherent_spectrum<S: TransitionSource>(
    source: &S,
    laser: &LaserField,
    config: &RunConfig,
    slices: &[usize],
) -> Result<(Vec<f64>, Vec<MomentumSlice>)> {
    let window = SamplingWindow::retained(config);
    let track = FieldTrack::new(laser, window.times());
    if !source.supports(&track.times) {
        return Err(Error::InvalidInput(
            "transition source is not sampled on the spectral window".into(),
        ));
    }
    let momenta = *source.momenta();
    if let Some(&bad) = slices.iter().find(|&&i| i >= momenta.n) {
        return Err(Error::InvalidInput(format!("slice index {bad} outside the momentum grid")));
    }
    let orders = positive_orders(&window, config.omega_l);
    let weights = momenta.trapezoid_weights();
    let fft = ForwardTransform::new(window);
    let half = orders.len();
    let power = |iv: usize, buf: &mut Vec<C64>, scratch: &mut Vec<C64>| -> Vec<f64> {
        buf.resize(window.n, C64::default());
        source.fill_amplitudes(iv, &track, buf);
        fft.apply(buf, scratch);
        (0..half).map(|k| orders[k] * orders[k] * buf[k].norm_sqr()).collect()
    };
    let (s_inc, _, _) = ordered_fold(
        momenta.n,
        || (vec![0.0; half], Vec::new(), Vec::new()),
        |(acc, buf, scratch), iv| {
            let mut p = power(iv, buf, scratch);
            p.iter_mut().for_each(|x| *x *= weights[iv]);
            add_assign(acc, &p);
        },
        |(a, _, _), (b, _, _)| add_assign(a, &b),
    );
    let mut buf = Vec::new();
    let mut scratch = Vec::new();
    let slices = slices
        .iter()
        .map(|&iv| MomentumSlice {
            index: iv,
            v: momenta.point(iv),
            s: power(iv, &mut buf, &mut scratch),
        })
        .collect();
    Ok((s_inc, slices))
}

pub fn spectrum<S: TransitionSource>(
    dipole: &DipoleRecord,
    source: &S,
    laser: &LaserField,
    config: &RunConfig,
    slices: &[usize],
) -> Result<SpectrumResult> {
    let s_coh = coherent_spectrum(dipole, config)?;
    let (s_inc, slices) = incoherent_spectrum(source, laser, config, slices)?;
    let orders = positive_orders(&SamplingWindow::retained(config), config.omega_l);
    Ok(SpectrumResult::new(orders, s_coh, s_inc, slices))
}

/// Highest harmonic kept in the scattered field by default: twice the
/// semiclassical cutoff order, rounded up.
pub fn default_field_orders(config: &RunConfig) -> u32 {
    let up = config.e0 * config.e0 / (4.0 * config.omega_l * config.omega_l);
    (2.0 * (config.ip + 3.17 * up) / config.omega_l).ceil() as u32
}

/// Positive-frequency scattered field on the retained window,
/// `E(t) = sum_{q=1}^{q_c} i q d_q e^{-i w_q t}` with
/// `d_q = (1/T_w) int <d(t)> e^{i w_q t} dt` the Fourier weight of the dipole.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteredField {
    pub window: SamplingWindow,
    pub weights: Vec<C64>,
    pub field: Vec<C64>,
}

pub fn scattered_field_time(dipole: &DipoleRecord, config: &RunConfig, q_c: u32) -> Result<ScatteredField> {
    let window = SamplingWindow::retained(config);
    let spline = dipole.spline()?;
    let samples: Vec<f64> = window.times().iter().map(|&t| spline.eval(t)).collect();
    let weights: Vec<C64> = (1..=q_c)
        .map(|q| single_frequency(&samples, &window, -(q as f64) * config.omega_l) / window.duration())
        .collect();
    let field = window
        .times()
        .iter()
        .map(|&t| {
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let q = (i + 1) as f64;
                    C64::new(0.0, q) * w * C64::from_polar(1.0, -q * config.omega_l * t)
                })
                .sum()
        })
        .collect();
    Ok(ScatteredField {
        window,
        weights,
        field,
    })
}
