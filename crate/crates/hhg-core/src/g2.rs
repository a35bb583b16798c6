//! Second-order correlation of one harmonic mode.
//!
//! With `t0 = 0` and reference time `t = T`, the numerator is
//! `int e^{i w (t1 + t2 - t3 - t4)} <d(t1) d(t2) d(t3) d(t4)>` with `t1, t4`
//! on `W1 = [0, T]` and `t2, t3` on `W2 = [tau, T + tau]`, and the
//! denominator is `G1(W1) G1(W2)`. The four-point function is expanded in
//! the ground state and the continuum `{|v>}`:
//!
//! * `T_coh`: `<d1><d4>` times the full two-point function on `W2`,
//! * `T_cross`: one continuum excursion with two factors of `<d>`,
//! * `T_cc`: the ground-return product plus `I1..I4`, where the
//!   continuum-continuum element `<v|d(t)|v'> = [Delta r(v,t,t0) + i d/dv] delta(v - v')`
//!   reduces every term to one momentum integral.
//!
//! Per momentum all time dependence factorizes into one-dimensional
//! transforms, which is what [`g2_kernels`] evaluates. [`g2_brute_force`]
//! runs the literal four-time trapezoid for cross-checks on coarse grids.


use crate::config::RunConfig;
use crate::dipole::{compute_dipole_on, FieldTrack, TransitionRow, TransitionSource};
use crate::error::{Error, Result};
use crate::fourier::CubicSpline;
use crate::pulse::{AtomSpec, LaserField};
use crate::quad::{ordered_fold, Grid1D};
use crate::C64;

/// Largest phase advance of the time integrands per fine step [rad].
pub const MAX_PHASE_STEP: f64 = 0.1;
/// Fine steps per dipole sample on the paper grid.
pub const DIPOLE_COARSENING: usize = 8;
/// Refuse brute-force runs above this many integrand evaluations.
pub const BRUTE_FORCE_BUDGET: f64 = 2e9;

/// Uniform time grid `t_j = j h` carrying both windows for every delay.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Grid {
    pub h: f64,
    /// Steps per window; the window length is `window_steps * h`.
    pub window_steps: usize,
    /// Delay of each sample in steps.
    pub offsets: Vec<usize>,
    /// The dipole is computed every `coarsening` steps and interpolated.
    pub coarsening: usize,
}

impl G2Grid {
    /// Window of one period, `tau_samples` delays spread evenly over one
    /// period, step refined until `e^{-i w t} D_v(t)` advances by at most
    /// [`MAX_PHASE_STEP`] for every harmonic up to `q_max`.
    pub fn for_config(config: &RunConfig, q_max: u32) -> Result<Self> {
        config.validate()?;
        let period = config.period();
        let n_tau = config.tau_samples;
        let dtau = period / (n_tau - 1) as f64;
        let m = ((max_phase_rate(config, q_max) * dtau / MAX_PHASE_STEP).ceil() as usize)
            .div_ceil(DIPOLE_COARSENING)
            * DIPOLE_COARSENING;
        Ok(Self {
            h: dtau / m as f64,
            window_steps: (n_tau - 1) * m,
            offsets: (0..n_tau).map(|k| k * m).collect(),
            coarsening: DIPOLE_COARSENING,
        })
    }

    /// A window of `window_steps` steps of size `period / window_steps`.
    pub fn uniform(period: f64, window_steps: usize, offsets: Vec<usize>) -> Result<Self> {
        if window_steps == 0 || offsets.is_empty() {
            return Err(Error::InvalidInput("g2 grid needs a window and at least one delay".into()));
        }
        Ok(Self {
            h: period / window_steps as f64,
            window_steps,
            offsets,
            coarsening: 1,
        })
    }

    pub fn total_steps(&self) -> usize {
        self.window_steps + self.offsets.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.total_steps() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn fine(&self) -> Grid1D {
        Grid1D {
            min: 0.0,
            max: self.total_steps() as f64 * self.h,
            n: self.len(),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.fine().points()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.offsets.iter().map(|&o| o as f64 * self.h).collect()
    }

    /// Grid on which the dipole is integrated before interpolation.
    pub fn coarse(&self) -> Result<Grid1D> {
        let steps = self.total_steps();
        if steps % self.coarsening != 0 {
            return Err(Error::InvalidInput(format!(
                "coarsening {} does not divide {steps} steps",
                self.coarsening
            )));
        }
        Grid1D::new(0.0, steps as f64 * self.h, steps / self.coarsening + 1)
    }
}

/// Upper bound on `|d/dt|` of the phase of `e^{-i q w t} D_v(t)`.
pub fn max_phase_rate(config: &RunConfig, q_max: u32) -> f64 {
    let k = config.p_lim + config.e0 / config.omega_l;
    0.5 * k * k + config.ip + q_max as f64 * config.omega_l
}

/// `<d(t)>` on the fine grid of `grid`.
pub fn dipole_on_grid(laser: &LaserField, atom: &AtomSpec, momenta: &Grid1D, grid: &G2Grid) -> Result<Vec<f64>> {
    let coarse = grid.coarse()?;
    let samples = compute_dipole_on(laser, atom, momenta, &coarse)?;
    if grid.coarsening == 1 {
        return Ok(samples);
    }
    let spline = CubicSpline::new(coarse, samples)?;
    let fine = grid.fine();
    Ok((0..fine.n).map(|j| spline.eval(fine.point(j))).collect())
}

/// Kernel values of one delay. Raw transforms, no `q` prefactors.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DelayKernels {
    /// `int_{W2} e^{-i w t} <d(t)>`.
    pub c2: C64,
    pub gi2: f64,
    /// Cross term with `<d(t4)>` outside, before conjugate partner.
    pub b: C64,
    /// Conjugate partner of `b` (`<d(t1)>` outside).
    pub c: C64,
    pub x12: C64,
    pub x34: C64,
    pub i1: C64,
    pub i2: C64,
    pub i3: C64,
    pub i4: C64,
    pub p13: C64,
    pub p24: C64,
}

/// Factorized transforms for one harmonic at every delay.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Kernels {
    pub q: u32,
    pub omega: f64,
    pub taus: Vec<f64>,
    /// `int_{W1} e^{-i w t} <d(t)>`.
    pub c1: C64,
    pub gi1: f64,
    pub delays: Vec<DelayKernels>,
}

impl G2Kernels {
    pub fn gc1(&self) -> f64 {
        self.c1.norm_sqr()
    }

    pub fn term_coherent_product(&self) -> Vec<C64> {
        self.delays
            .iter()
            .map(|k| C64::from(self.gc1() * (k.c2.norm_sqr() + k.gi2)))
            .collect()
    }

    pub fn term_cross(&self) -> Vec<C64> {
        self.delays.iter().map(|k| k.b + k.c).collect()
    }

    pub fn term_cc(&self) -> Vec<C64> {
        self.delays
            .iter()
            .map(|k| k.x12 * k.x34 + k.i1 + k.i2 + k.i3 + k.i4)
            .collect()
    }

    /// Single-emitter numerator `<d1 d2 d3 d4>` per delay.
    pub fn numerator(&self) -> Vec<C64> {
        let coh = self.term_coherent_product();
        let cross = self.term_cross();
        let cc = self.term_cc();
        (0..self.delays.len()).map(|i| coh[i] + cross[i] + cc[i]).collect()
    }

    /// `G1(W1) G1(W2)` per delay.
    pub fn denominator(&self) -> Vec<f64> {
        self.delays
            .iter()
            .map(|k| (self.gc1() + self.gi1) * (k.c2.norm_sqr() + k.gi2))
            .collect()
    }

    pub fn components(&self) -> G2Components {
        let t_coh = self.term_coherent_product();
        let t_cross = self.term_cross();
        let t_cc = self.term_cc();
        let numerator = self.numerator();
        let denominator = self.denominator();
        let g2 = normalize(&numerator, &denominator);
        G2Components {
            q: self.q,
            taus: self.taus.clone(),
            t_coh,
            t_cross,
            t_cc,
            numerator,
            denominator,
            g2,
        }
    }
}

/// Assembled terms per delay. Terms are raw (no `q^4`), `g2` is
/// normalized and therefore prefactor free.
#[derive(Debug, Clone, PartialEq)]
pub struct G2Components {
    pub q: u32,
    pub taus: Vec<f64>,
    pub t_coh: Vec<C64>,
    pub t_cross: Vec<C64>,
    pub t_cc: Vec<C64>,
    pub numerator: Vec<C64>,
    pub denominator: Vec<f64>,
    pub g2: Vec<f64>,
}

impl G2Components {
    /// Largest `|Im N| / |N|` over the delays.
    pub fn imaginary_residue(&self) -> f64 {
        self.numerator
            .iter()
            .map(|n| if n.norm() > 0.0 { n.im.abs() / n.norm() } else { 0.0 })
            .fold(0.0, f64::max)
    }

    pub fn check_denominator(&self) -> Result<()> {
        match self.denominator.iter().position(|&d| !(d > 0.0) || !d.is_finite()) {
            Some(i) => Err(Error::Degenerate(format!(
                "harmonic {} has zero intensity at tau = {}",
                self.q, self.taus[i]
            ))),
            None => Ok(()),
        }
    }
}

pub fn normalize(numerator: &[C64], denominator: &[f64]) -> Vec<f64> {
    numerator.iter().zip(denominator).map(|(n, d)| n.re / d).collect()
}

/// Running sums `P[j] = sum_{i<j} x_i`, turning window trapezoids into
/// two lookups.
struct Prefix {
    sums: Vec<C64>,
}

impl Prefix {
    fn fill(&mut self, x: impl Iterator<Item = C64>) {
        self.sums.clear();
        let mut acc = C64::default();
        self.sums.push(acc);
        for v in x {
            acc += v;
            self.sums.push(acc);
        }
    }

    /// Trapezoid over steps `[a, a + n]`.
    #[inline]
    fn window(&self, a: usize, n: usize, h: f64) -> C64 {
        let first = self.sums[a + 1] - self.sums[a];
        let last = self.sums[a + n + 1] - self.sums[a + n];
        (self.sums[a + n + 1] - self.sums[a] - 0.5 * (first + last)) * h
    }
}

/// Trapezoid of `x` over steps `[a, a + n]`.
fn window_sum(x: &[C64], a: usize, n: usize, h: f64) -> C64 {
    let mut acc = 0.5 * (x[a] + x[a + n]);
    for v in &x[a + 1..a + n] {
        acc += v;
    }
    acc * h
}

/// Per-harmonic data shared by all momenta.
struct Harmonic {
    q: u32,
    omega: f64,
    /// `e^{-i w t_j}`.
    minus: Vec<C64>,
    c1: C64,
    delays: Vec<DelayPlain>,
}

/// Momentum-independent transforms of one delay window.
#[derive(Clone, Copy)]
struct DelayPlain {
    offset: usize,
    c2: C64,
    /// `int_{W2} e^{i w s} ds`.
    u2: C64,
    /// `int_{W2} e^{i w s} (s - t0) ds`.
    s2: C64,
}

#[derive(Clone, Default)]
struct DelayAcc {
    gi2: f64,
    bx: C64,
    cx: C64,
    x12: C64,
    x34: C64,
    i1: f64,
    i2: C64,
    i3: C64,
    p13: C64,
    p24: C64,
}

#[derive(Clone, Default)]
struct HarmonicAcc {
    gi1: f64,
    i4: f64,
    delays: Vec<DelayAcc>,
}

impl HarmonicAcc {
    fn merge(&mut self, other: &HarmonicAcc) {
        self.gi1 += other.gi1;
        self.i4 += other.i4;
        for (a, b) in self.delays.iter_mut().zip(&other.delays) {
            a.gi2 += b.gi2;
            a.bx += b.bx;
            a.cx += b.cx;
            a.x12 += b.x12;
            a.x34 += b.x34;
            a.i1 += b.i1;
            a.i2 += b.i2;
            a.i3 += b.i3;
            a.p13 += b.p13;
            a.p24 += b.p24;
        }
    }
}

struct Scratch {
    row: TransitionRow,
    f: Prefix,
    h: Prefix,
    fp: Prefix,
    r: Prefix,
}

/// Factorized kernels of every harmonic in `qs` on `grid`.
///
/// `dipole` holds `<d(t)>` on the fine grid of `grid`. Momentum rows come
/// from `source`; each row is transformed once per harmonic, and the
/// momentum sum follows the fixed-order reduction of [`ordered_fold`].
pub fn g2_kernels<S: TransitionSource>(
    source: &S,
    laser: &LaserField,
    dipole: &[f64],
    grid: &G2Grid,
    omega_l: f64,
    qs: &[u32],
) -> Result<Vec<G2Kernels>> {
    let times = grid.times();
    if dipole.len() != times.len() {
        return Err(Error::InvalidInput(format!(
            "dipole has {} samples, grid has {}",
            dipole.len(),
            times.len()
        )));
    }
    if !source.supports(&times) {
        return Err(Error::InvalidInput("transition source is not sampled on the g2 grid".into()));
    }
    let track = FieldTrack::new(laser, times);
    let t0 = laser.t_start;
    let h = grid.h;
    let n = grid.window_steps;
    let harmonics: Vec<Harmonic> = qs
        .iter()
        .map(|&q| {
            let omega = q as f64 * omega_l;
            let minus: Vec<C64> = track.times.iter().map(|&t| C64::from_polar(1.0, -omega * t)).collect();
            let coh: Vec<C64> = dipole.iter().zip(&minus).map(|(d, e)| e * *d).collect();
            let plus: Vec<C64> = minus.iter().map(|e| e.conj()).collect();
            let ramp: Vec<C64> = plus.iter().zip(&track.times).map(|(e, t)| e * (t - t0)).collect();
            let delays = grid
                .offsets
                .iter()
                .map(|&o| DelayPlain {
                    offset: o,
                    c2: window_sum(&coh, o, n, h),
                    u2: window_sum(&plus, o, n, h),
                    s2: window_sum(&ramp, o, n, h),
                })
                .collect();
            Harmonic {
                q,
                omega,
                c1: window_sum(&coh, 0, n, h),
                minus,
                delays,
            }
        })
        .collect();
    let momenta = *source.momenta();
    let weights = momenta.trapezoid_weights();
    let len = track.len();
    let n_delay = grid.offsets.len();

    let empty = || HarmonicAcc {
        delays: vec![DelayAcc::default(); n_delay],
        ..HarmonicAcc::default()
    };
    let new_prefix = || Prefix {
        sums: Vec::with_capacity(len + 1),
    };
    let (accs, _) = ordered_fold(
        momenta.n,
        || (vec![empty(); harmonics.len()], None::<Box<Scratch>>),
        |(accs, scratch), iv| {
            let s = scratch.get_or_insert_with(|| {
                Box::new(Scratch {
                    row: TransitionRow::with_len(len),
                    f: new_prefix(),
                    h: new_prefix(),
                    fp: new_prefix(),
                    r: new_prefix(),
                })
            });
            source.fill_row(iv, &track, &mut s.row);
            for (hm, acc) in harmonics.iter().zip(accs.iter_mut()) {
                let row = &s.row;
                s.f.fill(row.d.iter().zip(&hm.minus).map(|(d, e)| d * e));
                s.h.fill(row.d.iter().zip(&hm.minus).map(|(d, e)| d * e.conj()));
                s.fp.fill(row.dd.iter().zip(&hm.minus).map(|(d, e)| d * e));
                s.r.fill(row.dr.iter().zip(&hm.minus).map(|(r, e)| e.conj() * *r));
                accumulate(acc, s, hm, n, h, weights[iv]);
            }
        },
        |(a, _), (b, _)| {
            for (x, y) in a.iter_mut().zip(&b) {
                x.merge(y);
            }
        },
    );

    let i = C64::i();
    Ok(harmonics
        .iter()
        .zip(accs)
        .map(|(hm, acc)| {
            let delays = hm
                .delays
                .iter()
                .zip(&acc.delays)
                .map(|(p, a)| DelayKernels {
                    c2: p.c2,
                    gi2: a.gi2,
                    b: hm.c1 * a.bx,
                    c: hm.c1.conj() * a.cx,
                    x12: a.x12,
                    x34: a.x34,
                    i1: C64::from(a.i1),
                    i2: -i * p.u2.conj() * a.i2,
                    i3: i * p.u2 * a.i3,
                    i4: C64::from(p.u2.norm_sqr() * acc.i4),
                    p13: a.p13,
                    p24: a.p24,
                })
                .collect();
            G2Kernels {
                q: hm.q,
                omega: hm.omega,
                taus: grid.taus(),
                c1: hm.c1,
                gi1: acc.gi1,
                delays,
            }
        })
        .collect())
}

fn accumulate(acc: &mut HarmonicAcc, s: &Scratch, hm: &Harmonic, n: usize, h: f64, w: f64) {
    // F: e^{-iwt} D, H: e^{+iwt} D, F': e^{-iwt} dD/dv, R: e^{+iwt} Delta r
    let i = C64::i();
    let f1 = s.f.window(0, n, h);
    let fp1 = s.fp.window(0, n, h);
    acc.gi1 += w * f1.norm_sqr();
    acc.i4 += w * fp1.norm_sqr();
    for (p, d) in hm.delays.iter().zip(acc.delays.iter_mut()) {
        let o = p.offset;
        let f2 = s.f.window(o, n, h);
        let h2 = s.h.window(o, n, h);
        let fp2 = s.fp.window(o, n, h);
        let r2 = s.r.window(o, n, h);
        d.gi2 += w * f2.norm_sqr();
        d.bx += w * f1.conj() * (h2 * p.c2 + r2 * f2 + i * p.u2 * fp2);
        d.cx += w * f1 * (h2.conj() * p.c2.conj() + f2.conj() * r2.conj() - i * p.u2.conj() * fp2.conj());
        d.x12 += w * f1.conj() * h2;
        d.x34 += w * f1 * h2.conj();
        d.i1 += w * f1.norm_sqr() * r2.norm_sqr();
        d.i2 += w * f1 * (fp1.conj() * r2 + f1.conj() * p.s2);
        d.i3 += w * f1.conj() * (fp1 * r2.conj() + f1 * p.s2.conj());
        d.p13 += w * f1.conj() * f2;
        d.p24 += w * f2.conj() * f1;
    }
}

/// Literal four-time trapezoid results for one delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceTerms {
    pub tau: f64,
    pub t_coh: C64,
    pub t_cross: C64,
    pub t_cc: C64,
    pub numerator: C64,
    pub denominator: f64,
    pub g2: f64,
}

/// Integrand evaluations of [`g2_brute_force`].
pub fn brute_force_cost(grid: &G2Grid, n_momenta: usize) -> f64 {
    let w = (grid.window_steps + 1) as f64;
    w.powi(4) * n_momenta as f64 * grid.offsets.len() as f64
}

/// Reference evaluation of the same numerator and denominator as
/// [`g2_kernels`], with every time integral done as a nested trapezoid.
pub fn g2_brute_force<S: TransitionSource>(
    source: &S,
    laser: &LaserField,
    dipole: &[f64],
    grid: &G2Grid,
    omega_l: f64,
    q: u32,
) -> Result<Vec<BruteForceTerms>> {
    let momenta = *source.momenta();
    let cost = brute_force_cost(grid, momenta.n);
    if cost > BRUTE_FORCE_BUDGET {
        return Err(Error::Guard(format!(
            "brute-force g2 needs ~{cost:.2e} integrand evaluations (limit {BRUTE_FORCE_BUDGET:.0e}); \
             use a window of at most ~24 steps and ~40 momenta"
        )));
    }
    let times = grid.times();
    if dipole.len() != times.len() || !source.supports(&times) {
        return Err(Error::InvalidInput("inputs are not sampled on the g2 grid".into()));
    }
    let track = FieldTrack::new(laser, times.clone());
    let len = times.len();
    let nv = momenta.n;
    let wv = momenta.trapezoid_weights();
    let mut rows = Vec::with_capacity(nv);
    for iv in 0..nv {
        let mut row = TransitionRow::with_len(len);
        source.fill_row(iv, &track, &mut row);
        rows.push(row);
    }
    // two-time continuum correlator X[a][b] = int dv conj(D_v(t_a)) D_v(t_b)
    let mut x = vec![C64::default(); len * len];
    for a in 0..len {
        for b in 0..len {
            x[a * len + b] = (0..nv).map(|iv| wv[iv] * rows[iv].d[a].conj() * rows[iv].d[b]).sum();
        }
    }
    let omega = q as f64 * omega_l;
    let t0 = laser.t_start;
    let h = grid.h;
    let n = grid.window_steps;
    let i = C64::i();
    let wt = |k: usize| if k == 0 || k == n { 0.5 * h } else { h };
    let e = |j: usize| C64::from_polar(1.0, omega * times[j]);
    let m = dipole;

    let two_point = |a0: usize| -> f64 {
        let mut g = C64::default();
        for ka in 0..=n {
            for kb in 0..=n {
                let (a, b) = (a0 + ka, a0 + kb);
                g += wt(ka) * wt(kb) * e(a) * e(b).conj() * (m[a] * m[b] + x[a * len + b]);
            }
        }
        g.re
    };
    let g_w1 = two_point(0);

    Ok(grid
        .offsets
        .iter()
        .map(|&o| {
            let (mut coh, mut cross, mut cc) = (C64::default(), C64::default(), C64::default());
            for k1 in 0..=n {
                let t1 = k1;
                for k2 in 0..=n {
                    let t2 = o + k2;
                    for k3 in 0..=n {
                        let t3 = o + k3;
                        for k4 in 0..=n {
                            let t4 = k4;
                            let ph = e(t1) * e(t2) * e(t3).conj() * e(t4).conj()
                                * (wt(k1) * wt(k2) * wt(k3) * wt(k4));
                            let means = m[t1] * m[t2] * m[t3] * m[t4] + m[t1] * m[t4] * x[t2 * len + t3];
                            let k0 = x[t1 * len + t2] * x[t3 * len + t4];
                            let mut cr = C64::default();
                            let mut c4 = C64::default();
                            for (iv, r) in rows.iter().enumerate() {
                                let (d1, d2, d3, d4) = (r.d[t1], r.d[t2], r.d[t3], r.d[t4]);
                                let (dr2, dr3) = (r.dr[t2], r.dr[t3]);
                                let (dd1, dd2, dd3, dd4) = (r.dd[t1], r.dd[t2], r.dd[t3], r.dd[t4]);
                                let forward = m[t4] * d1.conj() * (d2 * m[t3] + dr2 * d3 + i * dd3);
                                let partner = m[t1] * d4 * (d3.conj() * m[t2] + dr3 * d2.conj() - i * dd2.conj());
                                cr += wv[iv] * (forward + partner);
                                let i1 = d1.conj() * dr2 * dr3 * d4;
                                let i2 = -i * d4 * (dd1.conj() * dr2 + d1.conj() * (times[t2] - t0));
                                let i3 = i * d1.conj() * ((times[t3] - t0) * d4 + dr3 * dd4);
                                let i4 = dd1.conj() * dd4;
                                c4 += wv[iv] * (i1 + i2 + i3 + i4);
                            }
                            coh += ph * means;
                            cross += ph * cr;
                            cc += ph * (k0 + c4);
                        }
                    }
                }
            }
            let numerator = coh + cross + cc;
            let denominator = g_w1 * two_point(o);
            BruteForceTerms {
                tau: o as f64 * h,
                t_coh: coh,
                t_cross: cross,
                t_cc: cc,
                numerator,
                denominator,
                g2: numerator.re / denominator,
            }
        })
        .collect())
}

/// Everything needed to evaluate g2 for a configuration.
#[derive(Debug, Clone)]
pub struct G2Setup {
    pub grid: G2Grid,
    pub model: crate::dipole::TransitionModel,
    pub dipole: Vec<f64>,
}

impl G2Setup {
    /// Paper grid for harmonics up to `q_max`: one-period windows,
    /// `tau_samples` delays over one period.
    pub fn new(config: &RunConfig, q_max: u32) -> Result<Self> {
        let grid = G2Grid::for_config(config, q_max)?;
        let model = crate::dipole::TransitionModel::from_config(config)?;
        let dipole = dipole_on_grid(&model.laser, &model.atom, &model.momenta, &grid)?;
        Ok(Self { grid, model, dipole })
    }

    pub fn kernels(&self, omega_l: f64, qs: &[u32]) -> Result<Vec<G2Kernels>> {
        g2_kernels(&self.model, &self.model.laser, &self.dipole, &self.grid, omega_l, qs)
    }
}

/// `tau_k = k T / (n - 1)`, `k = 0..n`.
pub fn tau_grid(config: &RunConfig) -> Vec<f64> {
    let n = config.tau_samples;
    (0..n).map(|k| k as f64 * config.period() / (n - 1) as f64).collect()
}
