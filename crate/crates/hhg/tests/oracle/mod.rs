//! Slow reference numerics used to generate the golden files.
//!
//! Shares no numerical code with `hhg-core`: the field integrals are done by
//! Gauss-Legendre quadrature instead of antiderivatives, the dipole's inner
//! integral by composite Simpson on a fixed fine grid instead of adaptive
//! panels, the matrix-element derivative by central differences, and g2 by a
//! plain four-fold loop over a table built here.

#![allow(dead_code)]

use std::f64::consts::PI;

use hhg_core::RunConfig;
use num_complex::Complex64 as C;

/// Largest sub-step of the fine time grids.
const FINE_STEP: f64 = 0.0125;
const GL_SUB: usize = 2;

#[derive(Debug, Clone, Copy)]
pub struct Physics {
    pub e0: f64,
    pub omega: f64,
    pub phase: f64,
    pub ip: f64,
    pub kappa: f64,
    pub t_end: f64,
}

impl Physics {
    pub fn new(c: &RunConfig) -> Self {
        Self {
            e0: c.e0,
            omega: c.omega_l,
            phase: c.phase,
            ip: c.ip,
            kappa: c.kappa,
            t_end: c.n_cycles as f64 * 2.0 * PI / c.omega_l,
        }
    }

    pub fn field(&self, t: f64) -> f64 {
        if (0.0..=self.t_end).contains(&t) {
            self.e0 * (self.omega * t + self.phase).cos()
        } else {
            0.0
        }
    }

    pub fn potential(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_end);
        -self.e0 / self.omega * (self.omega * t + self.phase).sin()
    }

    /// Hydrogen-like 1s transition element, recomputed from its definition.
    pub fn element(&self, p: f64) -> C {
        let k = self.kappa;
        let norm = 8.0 * (2.0 * k.powi(5)).sqrt() / PI;
        C::new(0.0, norm * p / (p * p + k * k).powi(2))
    }

    pub fn element_derivative(&self, p: f64) -> C {
        let h = 1e-5;
        (self.element(p + h) - self.element(p - h)) / (2.0 * h)
    }
}

const GL5_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for k in 0..5 {
        s += GL5_W[k] * f(m + r * GL5_X[k]);
    }
    s * r
}

/// `int_0^{t_j} A` and `int_0^{t_j} A^2` at ascending instants `t_j >= 0`.
pub fn potential_integrals(ph: &Physics, times: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let a = |t: f64| ph.potential(t);
    let a2 = |t: f64| ph.potential(t).powi(2);
    let (mut ia, mut ia2) = (0.0, 0.0);
    let mut prev = 0.0;
    let mut out_a = Vec::with_capacity(times.len());
    let mut out_a2 = Vec::with_capacity(times.len());
    for &t in times {
        let n = (((t - prev) / FINE_STEP).ceil() as usize).max(1) * GL_SUB;
        let h = (t - prev) / n as f64;
        for k in 0..n {
            let (lo, hi) = (prev + k as f64 * h, prev + (k + 1) as f64 * h);
            ia += gauss5(&a, lo, hi);
            ia2 += gauss5(&a2, lo, hi);
        }
        out_a.push(ia);
        out_a2.push(ia2);
        prev = t;
    }
    (out_a, out_a2)
}

fn action_from(ph: &Physics, p: f64, t: f64, ia: f64, ia2: f64) -> f64 {
    0.5 * (p * p * t + 2.0 * p * ia + ia2) + ph.ip * t
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { x[i] - x[i - 1] } else { 0.0 };
            let right = if i + 1 < n { x[i + 1] - x[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// `<d(t)>` at ascending `times` (first one at the pulse start, 0).
pub fn dipole(ph: &Physics, momenta: &[f64], times: &[f64]) -> Vec<f64> {
    assert!(times[0] == 0.0);
    // fine grid: every interval of `times` split into an even number of steps
    let mut fine = vec![0.0];
    let mut marks = vec![0usize];
    for w in times.windows(2) {
        let n = 2 * ((w[1] - w[0]) / (2.0 * FINE_STEP)).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for k in 1..n {
            fine.push(w[0] + k as f64 * h);
        }
        fine.push(w[1]);
        marks.push(fine.len() - 1);
    }
    let (ia, ia2) = potential_integrals(ph, &fine);
    let e: Vec<f64> = fine.iter().map(|&t| ph.field(t)).collect();
    let a: Vec<f64> = fine.iter().map(|&t| ph.potential(t)).collect();
    let wp = trapezoid_weights(momenta);
    let mut out = vec![0.0; times.len()];
    for (ip, &p) in momenta.iter().enumerate() {
        let g: Vec<C> = (0..fine.len())
            .map(|k| {
                let s = action_from(ph, p, fine[k], ia[k], ia2[k]);
                C::from_polar(e[k], s) * ph.element(p + a[k])
            })
            .collect();
        let mut c = C::new(0.0, 0.0);
        let mut next = 1;
        for (j, &k) in marks.iter().enumerate() {
            while next < k {
                let h = fine[next + 1] - fine[next];
                c += (g[next - 1] + 4.0 * g[next] + g[next + 1]) * (h / 3.0);
                next += 2;
            }
            let s = action_from(ph, p, fine[k], ia[k], ia2[k]);
            let z = C::i() * ph.element(p + a[k]).conj() * C::from_polar(1.0, -s) * c;
            out[j] += wp[ip] * 2.0 * z.re;
        }
    }
    out
}

/// `D_v(t)`, `Delta r(v,t,0)` and `d/dv D_v(t)` for every momentum.
pub struct Table {
    pub d: Vec<Vec<C>>,
    pub dr: Vec<Vec<f64>>,
    pub dd: Vec<Vec<C>>,
}

pub fn table(ph: &Physics, momenta: &[f64], times: &[f64]) -> Table {
    let (ia, ia2) = potential_integrals(ph, times);
    let a: Vec<f64> = times.iter().map(|&t| ph.potential(t)).collect();
    let mut d = Vec::new();
    let mut dr = Vec::new();
    let mut dd = Vec::new();
    for &v in momenta {
        let mut rd = Vec::new();
        let mut rr = Vec::new();
        let mut rdd = Vec::new();
        for j in 0..times.len() {
            let phase = C::from_polar(1.0, action_from(ph, v, times[j], ia[j], ia2[j]));
            let x = v * times[j] + ia[j];
            let m = ph.element(v + a[j]);
            rd.push(phase * m);
            rr.push(x);
            rdd.push(phase * (C::new(0.0, x) * m + ph.element_derivative(v + a[j])));
        }
        d.push(rd);
        dr.push(rr);
        dd.push(rdd);
    }
    Table { d, dr, dd }
}

/// `sqrt(mean_t |D_v(t)|^2)` per momentum.
pub fn row_norms(ph: &Physics, momenta: &[f64], times: &[f64]) -> Vec<f64> {
    let t = table(ph, momenta, times);
    t.d.iter()
        .map(|r| (r.iter().map(|z| z.norm_sqr()).sum::<f64>() / r.len() as f64).sqrt())
        .collect()
}

/// `q^2 int dv |sum_n D_v(t_n) e^{-i w_q t_n} dt|^2` on the retained
/// sampling window of `config`.
pub fn incoherent_weight(config: &RunConfig, q: u32) -> f64 {
    let ph = Physics::new(config);
    let period = 2.0 * PI / config.omega_l;
    let t0 = config.warmup_cycles as f64 * period;
    let dt = (config.n_cycles - config.warmup_cycles) as f64 * period / config.n_fft as f64;
    let times: Vec<f64> = (0..config.n_fft).map(|n| t0 + n as f64 * dt).collect();
    let momenta = linspace(-config.p_lim, config.p_lim, config.n_els);
    let wv = trapezoid_weights(&momenta);
    let (ia, ia2) = potential_integrals(&ph, &times);
    let a: Vec<f64> = times.iter().map(|&t| ph.potential(t)).collect();
    let w = q as f64 * config.omega_l;
    let mut total = 0.0;
    for (iv, &v) in momenta.iter().enumerate() {
        let mut f = C::new(0.0, 0.0);
        for n in 0..times.len() {
            let s = action_from(&ph, v, times[n], ia[n], ia2[n]);
            f += C::from_polar(1.0, s - w * times[n]) * ph.element(v + a[n]);
        }
        total += wv[iv] * (f * dt).norm_sqr();
    }
    (q as f64).powi(2) * total
}

/// Mode intensity accumulated up to grid index `upto`, with running
/// trapezoids on the uniform grid `times`.
pub fn equal_time_intensity(ph: &Physics, momenta: &[f64], times: &[f64], q: u32, upto: usize) -> f64 {
    let times = &times[..=upto];
    let w = q as f64 * ph.omega;
    let m = dipole(ph, momenta, times);
    let h = times[1] - times[0];
    let trap = |x: &[C]| -> C {
        let mut s = C::new(0.0, 0.0);
        for k in 0..x.len() - 1 {
            s += (x[k] + x[k + 1]) * (0.5 * h);
        }
        s
    };
    let ph_t: Vec<C> = times.iter().map(|&t| C::from_polar(1.0, -w * t)).collect();
    let coh: Vec<C> = m.iter().zip(&ph_t).map(|(&d, e)| e * d).collect();
    let tab = table(ph, momenta, times);
    let wv = trapezoid_weights(momenta);
    let mut inc = 0.0;
    for (iv, row) in tab.d.iter().enumerate() {
        let f: Vec<C> = row.iter().zip(&ph_t).map(|(d, e)| d * e).collect();
        inc += wv[iv] * trap(&f).norm_sqr();
    }
    (q as f64).powi(2) * (trap(&coh).norm_sqr() + inc)
}

#[derive(Debug, Clone, Copy)]
pub struct G2Point {
    pub tau: f64,
    pub cross: C,
    pub cc: C,
    pub numerator: C,
    pub denominator: f64,
    pub g2: f64,
}

/// Four nested trapezoids over one-period windows, `t1, t4` in `[0, T]`,
/// `t2, t3` in `[tau, T + tau]`, inside a momentum trapezoid. The
/// window has `steps` intervals; delays are integer step offsets.
pub fn g2_brute_force(
    config: &RunConfig,
    momenta: &[f64],
    steps: usize,
    offsets: &[usize],
    q: u32,
    with_fluctuations: bool,
) -> Vec<G2Point> {
    let ph = Physics::new(config);
    let period = 2.0 * PI / config.omega_l;
    let h = period / steps as f64;
    let len = steps + offsets.iter().max().unwrap() + 1;
    let times: Vec<f64> = (0..len).map(|j| j as f64 * h).collect();
    let m = dipole(&ph, momenta, &times);
    let mut tab = table(&ph, momenta, &times);
    if !with_fluctuations {
        for r in tab.d.iter_mut().chain(tab.dd.iter_mut()) {
            r.iter_mut().for_each(|z| *z = C::new(0.0, 0.0));
        }
    }
    let wv = trapezoid_weights(momenta);
    let w = q as f64 * config.omega_l;
    let e: Vec<C> = times.iter().map(|&t| C::from_polar(1.0, w * t)).collect();
    let wt = |k: usize| if k == 0 || k == steps { 0.5 * h } else { h };
    let i = C::i();
    let corr = |a: usize, b: usize| -> C {
        let mut s = C::new(0.0, 0.0);
        for iv in 0..momenta.len() {
            s += wv[iv] * tab.d[iv][a].conj() * tab.d[iv][b];
        }
        s
    };
    let two_time = |o: usize| -> f64 {
        let mut g = C::new(0.0, 0.0);
        for ka in 0..=steps {
            for kb in 0..=steps {
                let (a, b) = (o + ka, o + kb);
                g += e[a] * e[b].conj() * (m[a] * m[b] + corr(a, b)) * (wt(ka) * wt(kb));
            }
        }
        g.re
    };
    let g_first = two_time(0);
    offsets
        .iter()
        .map(|&o| {
            let mut mean = C::new(0.0, 0.0);
            let mut cross = C::new(0.0, 0.0);
            let mut cc = C::new(0.0, 0.0);
            for k1 in 0..=steps {
                for k2 in 0..=steps {
                    for k3 in 0..=steps {
                        for k4 in 0..=steps {
                            let (t1, t2, t3, t4) = (k1, o + k2, o + k3, k4);
                            let weight = e[t1] * e[t2] * e[t3].conj() * e[t4].conj()
                                * (wt(k1) * wt(k2) * wt(k3) * wt(k4));
                            let mut x = C::new(0.0, 0.0);
                            let mut y = C::new(0.0, 0.0);
                            let (mut x12, mut x34, mut x23) =
                                (C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0));
                            for iv in 0..momenta.len() {
                                let (d, r, dd) = (&tab.d[iv], &tab.dr[iv], &tab.dd[iv]);
                                let wgt = wv[iv];
                                x12 += wgt * d[t1].conj() * d[t2];
                                x34 += wgt * d[t3].conj() * d[t4];
                                x23 += wgt * d[t2].conj() * d[t3];
                                x += wgt
                                    * (m[t4] * d[t1].conj() * (d[t2] * m[t3] + r[t2] * d[t3] + i * dd[t3])
                                        + m[t1] * d[t4] * (d[t3].conj() * m[t2] + r[t3] * d[t2].conj()
                                            - i * dd[t2].conj()));
                                y += wgt
                                    * (d[t1].conj() * r[t2] * r[t3] * d[t4]
                                        - i * d[t4] * (dd[t1].conj() * r[t2] + d[t1].conj() * times[t2])
                                        + i * d[t1].conj() * (times[t3] * d[t4] + r[t3] * dd[t4])
                                        + dd[t1].conj() * dd[t4]);
                            }
                            mean += weight * (m[t1] * m[t2] * m[t3] * m[t4] + m[t1] * m[t4] * x23);
                            cross += weight * x;
                            cc += weight * (x12 * x34 + y);
                        }
                    }
                }
            }
            let numerator = mean + cross + cc;
            let denominator = g_first * two_time(o);
            G2Point {
                tau: o as f64 * h,
                cross,
                cc,
                numerator,
                denominator,
                g2: numerator.re / denominator,
            }
        })
        .collect()
}
