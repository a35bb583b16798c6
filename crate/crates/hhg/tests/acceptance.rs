//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails. Runs at paper parameters, so it takes a minute or two.

mod common;

use std::cell::Cell;
use std::time::{Duration, Instant};

use common::*;
use hhg::commands::brute_force_grid;
use hhg_core::coherence::g1_series;
use hhg_core::dipole::{compute_dipole, DipoleRecord, TransitionModel};
use hhg_core::fourier::{ForwardTransform, SamplingWindow};
use hhg_core::g2::{dipole_on_grid, g2_brute_force, g2_kernels, tau_grid, G2Components, G2Grid, G2Setup};
use hhg_core::manyatom::{falling_factorial, g1_many, g2_many, paper_atom_numbers, NScaling};
use hhg_core::pulse::{action, excursion, AtomSpec, LaserField};
use hhg_core::spectrum::{spectrum, SpectrumResult};
use hhg_core::{RunConfig, C64};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, RngAlgorithm, TestRng, TestRunner};

const PLATEAU: [u32; 7] = [11, 13, 15, 17, 19, 21, 23];

struct Report {
    failed: Vec<&'static str>,
}

impl Report {
    fn line(&mut self, name: &'static str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(name);
        }
    }
}

/// Fresh deterministic runner; no failure files.
fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        PropConfig {
            cases,
            failure_persistence: None,
            ..PropConfig::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

struct FirstOrder {
    config: RunConfig,
    dipole: DipoleRecord,
    model: TransitionModel,
    spec: SpectrumResult,
    elapsed: Duration,
}

fn first_order() -> FirstOrder {
    let config = RunConfig::default();
    let start = Instant::now();
    let dipole = compute_dipole(&config).unwrap();
    let model = TransitionModel::from_config(&config).unwrap();
    let slice = model.momenta.nearest(0.0);
    let spec = spectrum(&dipole, &model, &model.laser, &config, &[slice]).unwrap();
    FirstOrder {
        config,
        dipole,
        model,
        spec,
        elapsed: start.elapsed(),
    }
}

struct SecondOrder {
    components: Vec<G2Components>,
    kernels: Vec<hhg_core::g2::G2Kernels>,
    setup_time: Duration,
    kernel_time: Duration,
}

fn second_order() -> SecondOrder {
    let config = RunConfig::paper_g2();
    let start = Instant::now();
    let setup = G2Setup::new(&config, *PLATEAU.iter().max().unwrap()).unwrap();
    let setup_time = start.elapsed();
    let start = Instant::now();
    let kernels = setup.kernels(config.omega_l, &PLATEAU).unwrap();
    let kernel_time = start.elapsed();
    SecondOrder {
        components: kernels.iter().map(|k| k.components()).collect(),
        kernels,
        setup_time,
        kernel_time,
    }
}

fn at(spec: &SpectrumResult, s: &[f64], q: u32) -> f64 {
    s[spec.bin_of(q as f64)]
}

/// `max/min` of `s` over bins with order in `[q - 1, q + 1]`, in dB.
fn window_contrast(spec: &SpectrumResult, s: &[f64], q: u32) -> f64 {
    let (lo, hi) = (spec.bin_of(q as f64 - 1.0), spec.bin_of(q as f64 + 1.0));
    let w = &s[lo..=hi];
    let max = w.iter().cloned().fold(f64::MIN, f64::max);
    let min = w.iter().cloned().fold(f64::MAX, f64::min);
    db(max / min)
}

fn spectrum_shape(r: &mut Report, f: &FirstOrder) {
    let spec = &f.spec;
    let s = &spec.s_coh;
    let odd_mid: Vec<f64> = (5..=19).step_by(2).map(|q| at(spec, s, q)).collect();
    let level = (odd_mid.iter().map(|x| x.ln()).sum::<f64>() / odd_mid.len() as f64).exp();
    let cutoff = (3..=41)
        .step_by(2)
        .filter(|&q| at(spec, s, q) >= 0.5 * level)
        .max()
        .unwrap_or(0);
    let drop = db(at(spec, s, cutoff) / at(spec, s, cutoff + 2));
    let (mut worst, mut worst_q) = (f64::INFINITY, 0);
    for q in (2..=cutoff + 1).step_by(2) {
        let odd = at(spec, s, q - 1).min(at(spec, s, q + 1));
        let margin = db(odd / at(spec, s, q));
        if margin < worst {
            worst = margin;
            worst_q = q;
        }
    }
    let runtime = secs(f.elapsed);
    r.line(
        "spectrum shape",
        (cutoff as i64 - 21).abs() <= 2 && worst >= 20.0 && runtime < 120.0,
        format!(
            "cutoff q={cutoff} (last odd order within 3 dB of the q=5..19 geometric mean; next odd order {drop:.1} dB lower), \
             weakest even-order suppression {worst:.1} dB at q={worst_q} (need >= 20), \
             runtime {runtime:.1} s on {} thread(s) (target < 120 s on 8 cores)",
            rayon::current_num_threads()
        ),
    );
}

/// `S(q) / mean(S(q-1), S(q+1))` in dB: height of the odd-order bin over
/// the adjacent even-order bins.
fn odd_even_contrast(spec: &SpectrumResult, s: &[f64], q: u32) -> f64 {
    db(at(spec, s, q) / (0.5 * (at(spec, s, q - 1) + at(spec, s, q + 1))))
}

fn incoherent_dominance(r: &mut Report, f: &FirstOrder) {
    let spec = &f.spec;
    let coh: f64 = spec.s_coh.iter().sum();
    let inc: f64 = spec.s_inc.iter().sum();
    let odd: Vec<u32> = (11..=21).step_by(2).collect();
    let inc_contrast = odd
        .iter()
        .map(|&q| odd_even_contrast(spec, &spec.s_inc, q).abs())
        .fold(0.0, f64::max);
    let inc_ripple = odd
        .iter()
        .map(|&q| window_contrast(spec, &spec.s_inc, q))
        .fold(0.0, f64::max);
    let coh_contrast = odd
        .iter()
        .map(|&q| odd_even_contrast(spec, &spec.s_coh, q))
        .fold(f64::INFINITY, f64::min);
    let slice = &spec.slices[0];
    let slice_contrast = odd.iter().map(|&q| window_contrast(spec, &slice.s, q)).sum::<f64>() / odd.len() as f64;
    r.line(
        "incoherent dominance",
        inc > coh && inc_contrast < 6.0 && slice_contrast >= 6.0,
        format!(
            "sum S_inc / sum S_coh = {:.3e}; odd-vs-even contrast over q=11..21: S_inc at most {inc_contrast:.2} dB \
             (need < 6; all-bin ripple within +-1 order up to {inc_ripple:.2} dB), S_coh at least {coh_contrast:.1} dB; \
             slice v={:.3} peak-to-valley {slice_contrast:.1} dB per order (peaked if >= 6)",
            inc / coh,
            slice.v
        ),
    );
}

fn first_order_coherence(r: &mut Report, f: &FirstOrder) {
    let taus = tau_grid(&f.config);
    let mut worst: f64 = 0.0;
    for q in PLATEAU {
        let s = g1_series(&f.dipole, &f.model, &f.model.laser, &f.config, q, &taus).unwrap();
        for g in &s.normalized {
            worst = worst.max((g.norm() - 1.0).abs());
        }
    }
    r.line(
        "first-order coherence",
        worst < 1e-9,
        format!("max ||g1(tau)| - 1| = {worst:.2e} over {} delays, q=11..23", taus.len()),
    );
}

fn anti_bunching(r: &mut Report, s: &SecondOrder) {
    let g0: Vec<(u32, f64)> = s.components.iter().map(|c| (c.q, c.g2[0])).collect();
    let all_below = g0.iter().all(|&(_, g)| g < 1.0);
    let within = |q: u32, paper: f64| {
        let g = g0.iter().find(|x| x.0 == q).unwrap().1;
        g >= paper / 3.0 && g <= paper * 3.0
    };
    let per_q = secs(s.setup_time) + secs(s.kernel_time) / PLATEAU.len() as f64;
    let values: Vec<String> = g0.iter().map(|(q, g)| format!("q{q}={g:.3e}")).collect();
    r.line(
        "anti-bunching",
        all_below && within(11, 5e-3) && within(13, 3e-3) && per_q < 600.0,
        format!(
            "g2(0): {} (need all < 1; q11 in [1.67e-3, 1.5e-2], q13 in [1e-3, 9e-3]); \
             setup {:.1} s + kernels {:.1} s for {} harmonics on {} thread(s)",
            values.join(" "),
            secs(s.setup_time),
            secs(s.kernel_time),
            PLATEAU.len(),
            rayon::current_num_threads()
        ),
    );
}

fn classical_violation(r: &mut Report, s: &SecondOrder) {
    let mut ok = true;
    let mut parts = Vec::new();
    for c in &s.components {
        let max = c.g2.iter().cloned().fold(f64::MIN, f64::max);
        ok &= c.g2[0] < max;
        parts.push(format!("q{}: {:.3e}/{:.3e}", c.q, c.g2[0], max));
    }
    r.line(
        "classical-inequality violation",
        ok,
        format!("g2(0)/max g2(tau): {}", parts.join(", ")),
    );
}

fn oracle_equivalence(r: &mut Report) {
    let mut worst_g2: f64 = 0.0;
    for q in G2_ORDERS {
        let c = g2_config();
        let rec = golden(&g2_golden_name(q));
        let model = TransitionModel::from_config(&c).unwrap();
        let grid = brute_force_grid(&c).unwrap();
        let dipole = dipole_on_grid(&model.laser, &model.atom, &model.momenta, &grid).unwrap();
        let k = g2_kernels(&model, &model.laser, &dipole, &grid, c.omega_l, &[q]).unwrap().remove(0);
        let comp = k.components();
        let cols = ["re_num", "denom", "g2"];
        for col in cols {
            let want = rec.column(col).unwrap();
            for i in 0..want.len() {
                let got = match col {
                    "re_num" => comp.numerator[i].re,
                    "denom" => comp.denominator[i],
                    _ => comp.g2[i],
                };
                worst_g2 = worst_g2.max(rel_err(got, want[i]));
            }
        }
    }
    let c = dipole_config();
    let d = compute_dipole(&c).unwrap();
    let (d_max, d_rms) = series_err(&d.samples, &golden(DIPOLE_GOLDEN).column("dipole").unwrap());

    // random small problems: factorized against the in-crate four-fold loop
    let worst_prop = Cell::new(0.0f64);
    let prop = runner(24).run(
        &(0.0f64..0.08, -3.0f64..3.0, 1u32..25, 4usize..9, 3usize..7, 2usize..4),
        |(e0, phase, q, steps, nv, ntau)| {
            let cfg = RunConfig {
                e0,
                phase,
                p_lim: 3.0,
                n_els: nv,
                n_t: steps + 1,
                tau_samples: ntau,
                ..RunConfig::default()
            };
            let model = TransitionModel::from_config(&cfg).unwrap();
            let grid = brute_force_grid(&cfg).unwrap();
            let dipole = dipole_on_grid(&model.laser, &model.atom, &model.momenta, &grid).unwrap();
            let fast = g2_kernels(&model, &model.laser, &dipole, &grid, cfg.omega_l, &[q]).unwrap().remove(0).components();
            let slow = g2_brute_force(&model, &model.laser, &dipole, &grid, cfg.omega_l, q).unwrap();
            for (i, b) in slow.iter().enumerate() {
                let e = rel_err(fast.numerator[i].re, b.numerator.re).max(rel_err(fast.denominator[i], b.denominator));
                worst_prop.set(worst_prop.get().max(e));
                prop_assert!(e < 1e-3, "q={} tau index {}: rel err {:e}", q, i, e);
            }
            Ok(())
        },
    );
    let worst_prop_v = worst_prop.get();
    r.line(
        "oracle equivalence",
        worst_g2 < 1e-3 && d_rms < 1e-3 && prop.is_ok(),
        format!(
            "g2 golden (n_t=24, n_v=40, q=11,13, 5 delays) max rel err {worst_g2:.2e}; \
             dipole golden rms {d_rms:.2e} (max {d_max:.2e} of peak); \
             24 random small grids factorized vs four-fold loop max rel err {worst_prop_v:.2e}{}",
            match &prop {
                Ok(()) => String::new(),
                Err(e) => format!(" ({e})"),
            }
        ),
    );
}

fn scaling_laws(r: &mut Report, f: &FirstOrder, s: &SecondOrder) {
    let taus = [0.0];
    let g1 = g1_series(&f.dipole, &f.model, &f.model.laser, &f.config, 11, &taus).unwrap();
    let (coh, inc) = (g1.coh[0], g1.inc[0]);
    let mut exact = true;
    for n in [1u64, 2, 3, 100, 12_345, 10_000_000] {
        let (c, i) = g1_many(coh, inc, n).unwrap();
        let nf = n as f64;
        exact &= c == coh * (nf * nf) && i == inc * nf;
    }
    let mut single = true;
    for (k, c) in s.kernels.iter().zip(&s.components) {
        let many = g2_many(k, 1).unwrap();
        single &= many.iter().zip(&c.g2).all(|(a, b)| a.to_bits() == b.to_bits());
    }
    let weights = falling_factorial(2, 3) == 0.0
        && falling_factorial(3, 4) == 0.0
        && falling_factorial(3, 3) == 6.0
        && falling_factorial(4, 4) == 24.0
        && NScaling::new(1).map(|w| w.b == 0.0 && w.c == 0.0).unwrap_or(false)
        && NScaling::new(3).map(|w| w.b == 6.0 && w.c == 0.0).unwrap_or(false);
    r.line(
        "exact scaling laws",
        exact && single && weights,
        format!(
            "g1_many (N^2, N) exact: {exact}; g2_many(N=1) bit-equal to single atom for q=11..23: {single}; \
             falling factorials vanish below their order: {weights}"
        ),
    );
}

fn many_atom_limit(r: &mut Report, s: &SecondOrder) {
    let grid = paper_atom_numbers();
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [13, 19, 23] {
        let k = s.kernels.iter().find(|k| k.q == q).unwrap();
        let large = g2_many(k, 10_000_000).unwrap();
        let dev = large.iter().map(|g| (g - 1.0).abs()).fold(0.0, f64::max);
        let zero: Vec<f64> = grid.iter().map(|&n| (g2_many(k, n).unwrap()[0] - 1.0).abs()).collect();
        let rises: Vec<String> = zero
            .windows(2)
            .zip(&grid[1..])
            .filter(|(w, _)| w[1] > w[0])
            .map(|(_, n)| format!("N={n}"))
            .collect();
        ok &= dev < 0.05 && rises.is_empty();
        parts.push(format!(
            "q{q}: max|g2-1| at N=1e7 {dev:.2e}, |g2(0)-1| {:.2e} -> {:.2e}{}",
            zero[0],
            zero[zero.len() - 1],
            if rises.is_empty() {
                " monotone".to_string()
            } else {
                format!(" increases at {}", rises.join(","))
            }
        ));
    }
    r.line("many-atom limit", ok, parts.join("; "));
}

fn determinism(config: &RunConfig) -> bool {
    let run = || {
        let d = compute_dipole(config).unwrap();
        let model = TransitionModel::from_config(config).unwrap();
        let s = spectrum(&d, &model, &model.laser, config, &[0]).unwrap();
        let grid = G2Grid::uniform(config.period(), 12, vec![0, 4, 12]).unwrap();
        let dg = dipole_on_grid(&model.laser, &model.atom, &model.momenta, &grid).unwrap();
        let k = g2_kernels(&model, &model.laser, &dg, &grid, config.omega_l, &[11, 13]).unwrap();
        let mut bits: Vec<u64> = d.samples.iter().map(|x| x.to_bits()).collect();
        bits.extend(s.s_coh.iter().chain(&s.s_inc).map(|x| x.to_bits()));
        for k in &k {
            for n in k.numerator() {
                bits.extend([n.re.to_bits(), n.im.to_bits()]);
            }
        }
        bits
    };
    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let one = pool(1).install(run);
    let three = pool(3).install(run);
    let five = pool(5).install(run);
    one == three && one == five
}

fn numerics_invariants(r: &mut Report) {
    let config = RunConfig::default();
    let laser = LaserField::from_config(&config);
    let atom = AtomSpec::from_config(&config);
    let cases = Cell::new(0usize);
    let add_worst = Cell::new(0.0f64);
    let additivity = runner(256).run(
        &(-4.0f64..4.0, 0.0f64..880.0, 0.0f64..880.0, 0.0f64..880.0),
        |(p, a, b, c)| {
            let mut t = [a, b, c];
            t.sort_by(f64::total_cmp);
            let whole = action(p, t[2], t[0], &laser, &atom);
            let parts = action(p, t[2], t[1], &laser, &atom) + action(p, t[1], t[0], &laser, &atom);
            let e = (whole - parts).abs() / whole.abs().max(1.0);
            add_worst.set(add_worst.get().max(e));
            cases.set(cases.get() + 1);
            prop_assert!(e < 1e-6);
            Ok(())
        },
    );
    let dr_worst = Cell::new(0.0f64);
    let excursion_fd = runner(256).run(&(-4.0f64..4.0, 0.0f64..400.0, 1.0f64..400.0), |(p, t0, dt)| {
        let h = 1e-4;
        let fd = (action(p + h, t0 + dt, t0, &laser, &atom) - action(p - h, t0 + dt, t0, &laser, &atom)) / (2.0 * h);
        let dr = excursion(p, t0 + dt, t0, &laser);
        let e = (fd - dr).abs() / dr.abs().max(1.0);
        dr_worst.set(dr_worst.get().max(e));
        cases.set(cases.get() + 1);
        prop_assert!(e < 1e-6);
        Ok(())
    });
    let pv_worst = Cell::new(0.0f64);
    let parseval = runner(256).run(
        &(
            prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 8..400),
            -50.0f64..50.0,
            0.01f64..3.0,
        ),
        |(values, t0, dt)| {
            let w = SamplingWindow {
                t_start: t0,
                dt,
                n: values.len(),
            };
            let x: Vec<C64> = values.iter().map(|&(a, b)| C64::new(a, b)).collect();
            let time: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>() * dt;
            let freq = ForwardTransform::new(w).series(x, 1.0).energy();
            let e = ((freq - time) / time).abs();
            pv_worst.set(pv_worst.get().max(e));
            cases.set(cases.get() + 1);
            prop_assert!(e < 1e-6);
            Ok(())
        },
    );
    let small = RunConfig {
        n_cycles: 2,
        n_els: 24,
        n_t: 300,
        n_fft: 600,
        ..RunConfig::default()
    };
    let deterministic = determinism(&small);
    let (add_worst_v, dr_worst_v, pv_worst_v) = (add_worst.get(), dr_worst.get(), pv_worst.get());
    r.line(
        "numerics invariants",
        additivity.is_ok() && excursion_fd.is_ok() && parseval.is_ok() && deterministic,
        format!(
            "action additivity {add_worst_v:.1e}, excursion vs dS/dp {dr_worst_v:.1e}, Parseval {pv_worst_v:.1e} \
             (each < 1e-6; {} random cases in total); dipole, spectra and g2 numerators bit-identical on 1, 3 and 5 threads: {deterministic}",
            cases.get()
        ),
    );
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; listing support keeps `--list` quiet
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut report = Report { failed: Vec::new() };
    let first = first_order();
    let second = second_order();
    spectrum_shape(&mut report, &first);
    incoherent_dominance(&mut report, &first);
    first_order_coherence(&mut report, &first);
    anti_bunching(&mut report, &second);
    classical_violation(&mut report, &second);
    oracle_equivalence(&mut report);
    scaling_laws(&mut report, &first, &second);
    many_atom_limit(&mut report, &second);
    numerics_invariants(&mut report);
    if report.failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: {} of 9 criteria failed: {}", report.failed.len(), report.failed.join(", "));
        std::process::exit(1);
    }
}
