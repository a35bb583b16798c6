//! Cubic resampling and forward transforms with the `e^{-i w t}` convention.
//!
//! Amplitudes approximate the continuous transform
//! `X(w) = int f(t) e^{-i w t} dt` over the sampled window:
//! `X_k = dt e^{-i w_k t_start} sum_n x_n e^{-2 pi i k n / N}`.
//! With that scaling Parseval reads `sum |x|^2 dt = sum |X|^2 dw / 2pi`.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::quad::{Grid1D, QuadValue};
use crate::C64;

/// Natural cubic spline through uniformly spaced samples.
#[derive(Debug, Clone)]
pub struct CubicSpline<T> {
    grid: Grid1D,
    y: Vec<T>,
    m: Vec<T>,
}

impl<T: QuadValue> CubicSpline<T> {
    pub fn new(grid: Grid1D, y: Vec<T>) -> Result<Self> {
        if y.len() != grid.n {
            return Err(Error::InvalidInput(format!(
                "spline: {} samples for a {}-point grid",
                y.len(),
                grid.n
            )));
        }
        let n = y.len();
        let h = grid.spacing();
        let mut m = vec![T::default(); n];
        if n > 2 {
            // Thomas algorithm for M[i-1] + 4 M[i] + M[i+1] = 6 (y[i+1] - 2 y[i] + y[i-1]) / h^2
            let inner = n - 2;
            let mut c = vec![0.0; inner];
            let mut d = vec![T::default(); inner];
            let scale = 6.0 / (h * h);
            for k in 0..inner {
                let i = k + 1;
                let rhs = (y[i + 1] - y[i] - (y[i] - y[i - 1])) * scale;
                if k == 0 {
                    c[k] = 0.25;
                    d[k] = rhs * 0.25;
                } else {
                    let denom = 1.0 / (4.0 - c[k - 1]);
                    c[k] = denom;
                    d[k] = (rhs - d[k - 1]) * denom;
                }
            }
            m[inner] = d[inner - 1];
            for k in (0..inner - 1).rev() {
                m[k + 1] = d[k] - m[k + 2] * c[k];
            }
        }
        Ok(Self { grid, y, m })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Evaluates the spline; outside the grid the end cubic is extrapolated.
    pub fn eval(&self, x: f64) -> T {
        let h = self.grid.spacing();
        let last = self.grid.n - 2;
        let pos = (x - self.grid.min) / h;
        let i = if pos <= 0.0 {
            0
        } else {
            (pos.floor() as usize).min(last)
        };
        let xi = self.grid.point(i);
        let a = xi + h - x;
        let b = x - xi;
        let (y0, y1, m0, m1) = (self.y[i], self.y[i + 1], self.m[i], self.m[i + 1]);
        m0 * (a * a * a / (6.0 * h))
            + m1 * (b * b * b / (6.0 * h))
            + (y0 * (1.0 / h) - m0 * (h / 6.0)) * a
            + (y1 * (1.0 / h) - m1 * (h / 6.0)) * b
    }
}

/// Uniform sampling window `t_n = t_start + n dt`, `n < n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingWindow {
    pub t_start: f64,
    pub dt: f64,
    pub n: usize,
}

impl SamplingWindow {
    /// `n` points covering `[start, end)` with the endpoint excluded, so a
    /// signal periodic on the window has its harmonics on exact bins.
    pub fn half_open(start: f64, end: f64, n: usize) -> Self {
        Self {
            t_start: start,
            dt: (end - start) / n as f64,
            n,
        }
    }

    /// The post-warm-up window used for spectra.
    pub fn retained(config: &RunConfig) -> Self {
        let period = config.period();
        Self::half_open(
            config.warmup_cycles as f64 * period,
            config.n_cycles as f64 * period,
            config.n_fft,
        )
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.time(i)).collect()
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.n as f64
    }

    /// Angular frequency of bin `k` in FFT layout (negative above N/2).
    pub fn bin_omega(&self, k: usize) -> f64 {
        let n = self.n as i64;
        let k = k as i64;
        let signed = if k < (n + 1) / 2 { k } else { k - n };
        2.0 * PI * signed as f64 / self.duration()
    }

    /// Bin of the positive frequency nearest to `omega`.
    pub fn nearest_bin(&self, omega: f64) -> usize {
        let k = (omega * self.duration() / (2.0 * PI)).round();
        (k.max(0.0) as usize).min(self.n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `X_k = dt e^{-i w_k t_start} DFT_k`, approximating the continuous transform.
    ContinuousTime,
}

#[derive(Debug, Clone)]
pub struct FourierSeries {
    /// Angular frequency per bin [a.u.], FFT layout.
    pub omega: Vec<f64>,
    /// `omega / omega_l`.
    pub orders: Vec<f64>,
    pub amplitudes: Vec<C64>,
    pub window: SamplingWindow,
    pub normalization: Normalization,
}

impl FourierSeries {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Number of non-negative frequency bins.
    pub fn positive_len(&self) -> usize {
        self.len().div_ceil(2)
    }

    /// `sum |X|^2 dw / 2pi`.
    pub fn energy(&self) -> f64 {
        let dw = 2.0 * PI / self.window.duration();
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * dw / (2.0 * PI)
    }
}

/// Reusable forward transform for one sampling window.
#[derive(Clone)]
pub struct ForwardTransform {
    fft: Arc<dyn Fft<f64>>,
    window: SamplingWindow,
    twiddle: Vec<C64>,
}

impl std::fmt::Debug for ForwardTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ForwardTransform")
            .field("window", &self.window)
            .finish()
    }
}

impl ForwardTransform {
    pub fn new(window: SamplingWindow) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(window.n);
        let twiddle = (0..window.n)
            .map(|k| C64::from_polar(window.dt, -window.bin_omega(k) * window.t_start))
            .collect();
        Self {
            fft,
            window,
            twiddle,
        }
    }

    pub fn window(&self) -> &SamplingWindow {
        &self.window
    }

    /// In-place transform of samples taken on the window.
    pub fn apply(&self, buf: &mut [C64], scratch: &mut Vec<C64>) {
        assert_eq!(buf.len(), self.window.n);
        scratch.resize(self.fft.get_inplace_scratch_len(), C64::default());
        self.fft.process_with_scratch(buf, scratch);
        for (x, w) in buf.iter_mut().zip(&self.twiddle) {
            *x *= w;
        }
    }

    pub fn series(&self, mut samples: Vec<C64>, omega_l: f64) -> FourierSeries {
        let mut scratch = Vec::new();
        self.apply(&mut samples, &mut scratch);
        let omega: Vec<f64> = (0..self.window.n).map(|k| self.window.bin_omega(k)).collect();
        FourierSeries {
            orders: omega.iter().map(|w| w / omega_l).collect(),
            omega,
            amplitudes: samples,
            window: self.window,
            normalization: Normalization::ContinuousTime,
        }
    }
}

/// Cubic interpolation of `samples` (on `grid`) onto `window`, then the
/// forward transform.
pub fn resample_fft(
    grid: &Grid1D,
    samples: &[f64],
    window: SamplingWindow,
    omega_l: f64,
) -> Result<FourierSeries> {
    if window.n < samples.len() {
        return Err(Error::InvalidInput(format!(
            "n_fft = {} is shorter than the input ({} samples)",
            window.n,
            samples.len()
        )));
    }
    let spline = CubicSpline::new(*grid, samples.to_vec())?;
    let resampled = (0..window.n)
        .map(|i| C64::new(spline.eval(window.time(i)), 0.0))
        .collect();
    Ok(ForwardTransform::new(window).series(resampled, omega_l))
}

/// `sum_n x_n e^{-i omega t_n} dt` over the window: one bin of the transform
/// at an arbitrary frequency.
pub fn single_frequency<T: Copy + Into<C64>>(samples: &[T], window: &SamplingWindow, omega: f64) -> C64 {
    let mut acc = C64::default();
    for (i, &x) in samples.iter().enumerate() {
        acc += x.into() * C64::from_polar(1.0, -omega * window.time(i));
    }
    acc * window.dt
}
