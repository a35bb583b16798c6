//! Quadrature kernels: adaptive Gauss-Kronrod, fixed-grid trapezoid, grid
//! derivatives and deterministic summation.

use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::C64;

/// Values that can be integrated: real or complex doubles.
pub trait QuadValue:
    Copy + Default + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Uniform grid `min, min + d, ..., max` with `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n < 2 || !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::InvalidInput(format!(
                "grid needs n >= 2 and min < max, got [{min}, {max}] with n = {n}"
            )));
        }
        Ok(Self { min, max, n })
    }

    /// Grid starting at `min` with `n` points spaced exactly `step`.
    pub fn with_step(min: f64, step: f64, n: usize) -> Result<Self> {
        Self::new(min, min + step * (n - 1) as f64, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    /// Index of the grid point closest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.min) / self.spacing()).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }
}

/// Items per sequential block in [`ordered_fold`].
pub const FOLD_CHUNK: usize = 16;

/// Parallel reduction over `0..n` with a fixed summation tree: items are
/// folded sequentially in blocks of [`FOLD_CHUNK`], block results are merged
/// pairwise in index order. Output is independent of the worker count.
pub fn ordered_fold<A, I, F, M>(n: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, usize) + Sync,
    M: Fn(&mut A, A) + Sync,
{
    let n_chunks = n.div_ceil(FOLD_CHUNK);
    let mut level: Vec<A> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for i in c * FOLD_CHUNK..((c + 1) * FOLD_CHUNK).min(n) {
                fold(&mut acc, i);
            }
            acc
        })
        .collect();
    if level.is_empty() {
        return init();
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                merge(&mut a, b);
            }
            next.push(a);
        }
        level = next;
    }
    level.pop().unwrap()
}

/// Elementwise `dst += src`.
pub fn add_assign<T: QuadValue>(dst: &mut [T], src: &[T]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = *d + *s;
    }
}


/// Pairwise summation in index order; the result depends only on the input
/// order, never on how the inputs were produced.
pub fn pairwise_sum<T: QuadValue>(xs: &[T]) -> T {
    const BLOCK: usize = 16;
    if xs.len() <= BLOCK {
        let mut acc = T::default();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Composite trapezoid on uniformly spaced samples.
///
/// Panics if fewer than two samples are given.
pub fn trapezoid<T: QuadValue>(samples: &[T], h: f64) -> T {
    assert!(samples.len() >= 2, "trapezoid needs at least two samples");
    let ends = (samples[0] + samples[samples.len() - 1]) * 0.5;
    (pairwise_sum(samples) - ends) * h
}

/// Running trapezoid integral: `out[k]` is the integral from sample 0 to k.
pub fn cumulative_trapezoid<T: QuadValue>(samples: &[T], h: f64) -> Vec<T> {
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = T::default();
    out.push(acc);
    for pair in samples.windows(2) {
        acc = acc + (pair[0] + pair[1]) * (0.5 * h);
        out.push(acc);
    }
    out
}

/// First derivative on a uniform grid: central differences inside, second
/// order one-sided stencils at both edges.
pub fn grid_derivative<T: QuadValue>(samples: &[T], h: f64) -> Result<Vec<T>> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "grid_derivative needs at least 3 samples, got {n}"
        )));
    }
    let inv = 1.0 / (2.0 * h);
    let mut out = Vec::with_capacity(n);
    out.push((samples[1] * 4.0 - samples[0] * 3.0 - samples[2]) * inv);
    for i in 1..n - 1 {
        out.push((samples[i + 1] - samples[i - 1]) * inv);
    }
    out.push((samples[n - 1] * 3.0 - samples[n - 2] * 4.0 + samples[n - 3]) * inv);
    Ok(out)
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Maximum number of interval bisections in [`adaptive_quad`].
pub const MAX_SUBDIVISIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub subdivisions: usize,
}

/// Adaptive quadrature failed to reach the tolerance; carries the best
/// estimate found.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("adaptive quadrature hit the subdivision cap with error estimate {error:e}")]
pub struct QuadError<T: std::fmt::Debug> {
    pub value: T,
    pub error: f64,
}

/// One 15-point Kronrod estimate and its difference from the embedded
/// 7-point Gauss rule.
pub fn gauss_kronrod_15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let s = f(center - x) + f(center + x);
        kronrod = kronrod + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).magnitude();
    (value, err)
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below `tol` (absolute) or [`MAX_SUBDIVISIONS`] is reached.
pub fn adaptive_quad<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult<T>, QuadError<T>>
where
    T: QuadValue + std::fmt::Debug,
    F: Fn(f64) -> T,
{
    assert!(a <= b && tol > 0.0, "adaptive_quad needs a <= b and tol > 0");
    if a == b {
        return Ok(QuadResult {
            value: T::default(),
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (v0, e0) = gauss_kronrod_15(&f, a, b);
    let mut intervals = vec![(a, b, v0, e0)];
    let mut subdivisions = 0;
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            let values: Vec<T> = intervals.iter().map(|iv| iv.2).collect();
            return Ok(QuadResult {
                value: pairwise_sum(&values),
                error: total_err,
                subdivisions,
            });
        }
        if subdivisions == MAX_SUBDIVISIONS {
            let values: Vec<T> = intervals.iter().map(|iv| iv.2).collect();
            return Err(QuadError {
                value: pairwise_sum(&values),
                error: total_err,
            });
        }
        let mut worst = 0;
        for (i, iv) in intervals.iter().enumerate() {
            if iv.3 > intervals[worst].3 {
                worst = i;
            }
        }
        let (lo, hi, _, _) = intervals[worst];
        let mid = 0.5 * (lo + hi);
        let (vl, el) = gauss_kronrod_15(&f, lo, mid);
        let (vr, er) = gauss_kronrod_15(&f, mid, hi);
        intervals[worst] = (lo, mid, vl, el);
        intervals.insert(worst + 1, (mid, hi, vr, er));
        subdivisions += 1;
    }
}
