//! N identical, uncorrelated emitters.
//!
//! First order: the coherent part scales with `N^2`, the incoherent part
//! with `N`. Second order keeps the leading terms of the expansion over
//! emitter tuples: all four dipoles on one atom (`N`), one pair on one atom
//! and two single dipoles elsewhere (`N!/(N-3)!`, six partitions), and four
//! distinct atoms (`N!/(N-4)!`).

use crate::error::{Error, Result};
use crate::g2::G2Kernels;
use crate::C64;

/// `n (n-1) ... (n-k+1)`; zero for `n < k`.
pub fn falling_factorial(n: u64, k: u32) -> f64 {
    if n < k as u64 {
        return 0.0;
    }
    (0..k as u64).map(|i| (n - i) as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NScaling {
    pub n_atoms: u64,
    /// Weight of the single-atom four-point function.
    pub a: f64,
    /// Weight of each pair-times-two-means partition.
    pub b: f64,
    /// Weight of the product of four means.
    pub c: f64,
}

impl NScaling {
    pub fn new(n_atoms: u64) -> Result<Self> {
        if n_atoms < 1 {
            return Err(Error::InvalidInput("n_atoms must be at least 1".into()));
        }
        Ok(Self {
            n_atoms,
            a: n_atoms as f64,
            b: falling_factorial(n_atoms, 3),
            c: falling_factorial(n_atoms, 4),
        })
    }

    /// Whether dropped lower-order terms are comparable to the kept ones.
    pub fn truncated(&self) -> bool {
        self.n_atoms < 4
    }
}

/// `(N^2 G_coh, N G_inc)`.
pub fn g1_many(coh: C64, inc: C64, n_atoms: u64) -> Result<(C64, C64)> {
    NScaling::new(n_atoms)?;
    let n = n_atoms as f64;
    Ok((coh * (n * n), inc * n))
}

/// Numerator and denominator of g2 for `n_atoms` emitters per delay.
pub fn g2_many_terms(kernels: &G2Kernels, n_atoms: u64) -> Result<(Vec<C64>, Vec<f64>)> {
    let w = NScaling::new(n_atoms)?;
    let n = n_atoms as f64;
    let k4 = kernels.numerator();
    let c1 = kernels.c1;
    let gi1 = kernels.gi1;
    let gc1 = kernels.gc1();
    let mut num = Vec::with_capacity(k4.len());
    let mut den = Vec::with_capacity(k4.len());
    for (d, k4) in kernels.delays.iter().zip(k4) {
        // mean transform in each time slot, with that slot's phase sign
        let m = [c1.conj(), d.c2.conj(), d.c2, c1];
        let pair = |a: usize, b: usize, p: C64| {
            let (x, y) = other_two(a, b);
            (m[a] * m[b] + p) * m[x] * m[y]
        };
        let partitions = pair(0, 1, d.x12)
            + pair(0, 2, d.p13)
            + pair(0, 3, C64::from(gi1))
            + pair(1, 2, C64::from(d.gi2))
            + pair(1, 3, d.p24)
            + pair(2, 3, d.x34);
        let k_coh = m[0] * m[1] * m[2] * m[3];
        num.push(k4 * w.a + partitions * w.b + k_coh * w.c);
        den.push((n * n * gc1 + n * gi1) * (n * n * d.c2.norm_sqr() + n * d.gi2));
    }
    Ok((num, den))
}

fn other_two(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&i| i != a && i != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// `g2(tau; N)`.
pub fn g2_many(kernels: &G2Kernels, n_atoms: u64) -> Result<Vec<f64>> {
    let (num, den) = g2_many_terms(kernels, n_atoms)?;
    Ok(crate::g2::normalize(&num, &den))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManyAtomSeries {
    pub scaling: NScaling,
    pub g2: Vec<f64>,
}

pub fn sweep_n(kernels: &G2Kernels, atoms: &[u64]) -> Result<Vec<ManyAtomSeries>> {
    atoms
        .iter()
        .map(|&n| {
            Ok(ManyAtomSeries {
                scaling: NScaling::new(n)?,
                g2: g2_many(kernels, n)?,
            })
        })
        .collect()
}

/// `N = round(10^x)` for `x = 2.0, 2.5, ..., 7.0`.
pub fn paper_atom_numbers() -> Vec<u64> {
    (0..=10).map(|i| 10f64.powf(2.0 + 0.5 * i as f64).round() as u64).collect()
}
