//! The five subcommands. Each resolves its configuration, loads or computes
//! the cached inputs, writes CSV files plus a manifest into the output
//! directory and removes everything it wrote if a later stage fails.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use hhg_core::coherence::{g1_equal_time, g1_series};
use hhg_core::dipole::{compute_dipole, compute_transition_table, time_grid, DipoleRecord, TransitionModel};
use hhg_core::g2::{brute_force_cost, dipole_on_grid, g2_brute_force, g2_kernels, tau_grid, G2Grid, BRUTE_FORCE_BUDGET};
use hhg_core::manyatom::{paper_atom_numbers, sweep_n};
use hhg_core::spectrum::{default_field_orders, scattered_field_time, spectrum};
use hhg_core::RunConfig;

use crate::cache::{cache_key, grid_tag, hex, Cache, CacheError, Kind};
use crate::configfile::{PartialConfig, Stage};
use crate::manifest::{CacheEntry, RunManifest};
use crate::output::{write_csv, Cell, OutputSet};
use crate::plot::{emit_plot_data, render_svg, PlotBlock, PlotData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Dipole,
    Spectrum,
    G1,
    G2,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dipole => "dipole",
            Command::Spectrum => "spectrum",
            Command::G1 => "g1",
            Command::G2 => "g2",
            Command::Sweep => "sweep",
        }
    }

    fn stage(self) -> Stage {
        match self {
            Command::G2 | Command::Sweep => Stage::SecondOrder,
            _ => Stage::FirstOrder,
        }
    }
}

/// Flags shared by all commands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub q: Option<u32>,
    pub n_atoms: Vec<u64>,
    pub brute_force: bool,
    pub no_cache: bool,
    /// `key=value` overrides applied after the config file.
    pub set: Vec<String>,
    /// Also write the transition table (dipole command).
    pub table: bool,
    pub svg: bool,
    pub cache_dir: Option<PathBuf>,
}

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outputs: Vec<PathBuf>,
    pub manifest: RunManifest,
}

pub fn resolve_config(command: Command, opts: &Options) -> Result<RunConfig> {
    let mut partial = match &opts.config {
        Some(p) => PartialConfig::load(p)?,
        None => PartialConfig::default(),
    };
    if !opts.set.is_empty() {
        let lines = opts
            .set
            .iter()
            .map(|kv| {
                let (k, v) = kv
                    .split_once('=')
                    .with_context(|| format!("--set expects key=value, got {kv:?}"))?;
                Ok(format!("{} = {}", k.trim(), v.trim()))
            })
            .collect::<Result<Vec<_>>>()?;
        partial = partial.overlay(&PartialConfig::parse(&lines.join("\n"), "--set")?);
    }
    if let Some(q) = opts.q {
        partial.q = Some(q);
    }
    if let [n] = opts.n_atoms[..] {
        partial.n_atoms = Some(n);
    }
    Ok(partial.resolve(command.stage())?)
}

struct Run {
    out: PathBuf,
    files: OutputSet,
    manifest: RunManifest,
    cache: Cache,
    use_cache: bool,
    svg: bool,
}

impl Run {
    fn new(command: Command, config: RunConfig, opts: &Options) -> Result<Self> {
        std::fs::create_dir_all(&opts.out).with_context(|| format!("creating {}", opts.out.display()))?;
        let cache = match &opts.cache_dir {
            Some(d) => Cache::new(d.clone()),
            None => Cache::from_env(),
        };
        Ok(Self {
            out: opts.out.clone(),
            files: OutputSet::new(),
            manifest: RunManifest::new(command.name(), config),
            cache,
            use_cache: !opts.no_cache,
            svg: opts.svg,
        })
    }

    fn config(&self) -> &RunConfig {
        &self.manifest.config
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let v = f()?;
        self.manifest.timings.push((stage.to_string(), start.elapsed()));
        Ok(v)
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
        let path = self.files.record(self.out.join(name));
        write_csv(&path, &[], header, rows)?;
        Ok(())
    }

    fn plot(&mut self, name: &str, data: &PlotData, y_column: usize) -> Result<()> {
        let path = self.files.record(self.out.join(name));
        emit_plot_data(&path, data)?;
        if self.svg {
            let svg = render_svg(data, y_column)?;
            let path = self.files.record(path.with_extension("svg"));
            std::fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    fn note_cache(&mut self, name: &str, hash: &[u8; 32], hit: bool, discarded: Option<String>) {
        if let Some(reason) = discarded {
            eprintln!("warning: recomputing {name}: {reason}");
            self.manifest.notes.push(format!("{name} cache discarded: {reason}"));
        }
        self.manifest.caches.push(CacheEntry {
            name: name.to_string(),
            hash: hex(hash),
            hit,
        });
    }

    /// `<d(t)>` on the configured time grid.
    fn dipole(&mut self) -> Result<DipoleRecord> {
        let config = self.config().clone();
        let grid = time_grid(&config)?;
        let hash = cache_key(&config, Kind::Dipole, &grid_tag(&grid));
        let start = Instant::now();
        let cached = self
            .cache
            .dipole_or(hash, self.use_cache, || -> Result<_, RunError> { Ok(compute_dipole(&config)?) })?;
        self.manifest.timings.push(("dipole".into(), start.elapsed()));
        self.note_cache("dipole", &cached.hash, cached.hit, cached.discarded);
        Ok(cached.value)
    }

    fn finish(mut self) -> Result<RunSummary> {
        self.files.record(self.out.join(crate::manifest::MANIFEST_FILE));
        self.manifest.outputs = self.files.files().to_vec();
        self.manifest.write(&self.out)?;
        let outputs = self.files.commit();
        Ok(RunSummary {
            outputs,
            manifest: self.manifest,
        })
    }
}

/// Bridges core and cache errors inside the cache closures.
#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Core(#[from] hhg_core::Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

pub fn run(command: Command, opts: &Options) -> Result<RunSummary> {
    let config = resolve_config(command, opts)?;
    let mut run = Run::new(command, config, opts)?;
    match command {
        Command::Dipole => cmd_dipole(&mut run, opts.table)?,
        Command::Spectrum => cmd_spectrum(&mut run)?,
        Command::G1 => cmd_g1(&mut run)?,
        Command::G2 => cmd_g2(&mut run, opts.brute_force)?,
        Command::Sweep => cmd_sweep(&mut run, &opts.n_atoms)?,
    }
    run.finish()
}

fn tau_over_t(tau: f64, config: &RunConfig) -> f64 {
    tau / config.period()
}

fn cmd_dipole(run: &mut Run, table: bool) -> Result<()> {
    let dipole = run.dipole()?;
    let rows: Vec<Vec<Cell>> = dipole
        .samples
        .iter()
        .enumerate()
        .map(|(j, &d)| vec![dipole.grid.point(j).into(), d.into(), (j >= dipole.warmup_index).into()])
        .collect();
    run.csv("dipole.csv", &["t", "dipole", "retained"], &rows)?;
    if table {
        let config = run.config().clone();
        let grid = time_grid(&config)?;
        let hash = cache_key(&config, Kind::Table, &grid_tag(&grid));
        let start = Instant::now();
        let cached = run.cache.table_or(hash, true, || -> Result<_, RunError> {
            Ok(compute_transition_table(&config)?)
        })?;
        run.manifest.timings.push(("table".into(), start.elapsed()));
        run.note_cache("table", &cached.hash, cached.hit, cached.discarded);
        let norms = cached.value.row_norms();
        let rows: Vec<Vec<Cell>> = norms
            .iter()
            .enumerate()
            .map(|(iv, &n)| vec![cached.value.momenta.point(iv).into(), n.into()])
            .collect();
        run.csv("table_norms.csv", &["v", "norm"], &rows)?;
    }
    Ok(())
}

/// Momentum slices reported next to the spectrum: electrons leaving with
/// little drift momentum.
const SLICE_MOMENTA: [f64; 3] = [0.0, 0.25, 0.5];

fn cmd_spectrum(run: &mut Run) -> Result<()> {
    let dipole = run.dipole()?;
    let config = run.config().clone();
    let model = TransitionModel::from_config(&config)?;
    let mut slices: Vec<usize> = SLICE_MOMENTA.iter().map(|&v| model.momenta.nearest(v)).collect();
    slices.dedup();
    let spec = run.timed("spectrum", || Ok(spectrum(&dipole, &model, &model.laser, &config, &slices)?))?;
    let rows: Vec<Vec<Cell>> = (0..spec.orders.len())
        .map(|k| {
            vec![
                spec.orders[k].into(),
                spec.s_coh[k].into(),
                spec.s_inc[k].into(),
                spec.s_total[k].into(),
            ]
        })
        .collect();
    run.csv("spectrum.csv", &["harmonic_order", "s_coh", "s_inc", "s_total"], &rows)?;

    let names: Vec<String> = spec.slices.iter().map(|s| format!("s_v{}", s.index)).collect();
    let mut header = vec!["harmonic_order"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<Cell>> = (0..spec.orders.len())
        .map(|k| {
            let mut r = vec![Cell::from(spec.orders[k])];
            r.extend(spec.slices.iter().map(|s| Cell::from(s.s[k])));
            r
        })
        .collect();
    run.csv("slices.csv", &header, &rows)?;
    let slice_rows: Vec<Vec<Cell>> = spec
        .slices
        .iter()
        .map(|s| vec![Cell::from(s.index as u64), s.v.into()])
        .collect();
    run.csv("slice_momenta.csv", &["index", "v"], &slice_rows)?;

    let order_limit = 2.0 * default_field_orders(&config) as f64;
    let plot = PlotData {
        x_label: "harmonic order".into(),
        y_label: "S".into(),
        log_y: true,
        columns: vec!["harmonic_order".into(), "s_coh".into(), "s_inc".into(), "s_total".into()],
        blocks: vec![PlotBlock {
            label: "spectrum".into(),
            rows: (0..spec.orders.len())
                .filter(|&k| spec.orders[k] <= order_limit)
                .map(|k| vec![spec.orders[k], spec.s_coh[k], spec.s_inc[k], spec.s_total[k]])
                .collect(),
        }],
    };
    run.plot("spectrum.dat", &plot, 1)?;

    let q_c = default_field_orders(&config);
    let field = run.timed("field", || Ok(scattered_field_time(&dipole, &config, q_c)?))?;
    let rows: Vec<Vec<Cell>> = field
        .window
        .times()
        .iter()
        .zip(&field.field)
        .map(|(&t, e)| vec![t.into(), e.re.into(), e.im.into()])
        .collect();
    run.csv("field.csv", &["t", "re_field", "im_field"], &rows)?;
    run.manifest.options.push(("field_orders".into(), q_c.to_string()));
    Ok(())
}

fn cmd_g1(run: &mut Run) -> Result<()> {
    let dipole = run.dipole()?;
    let config = run.config().clone();
    let model = TransitionModel::from_config(&config)?;
    let taus = tau_grid(&config);
    let q = config.q;
    let series = run.timed("g1", || Ok(g1_series(&dipole, &model, &model.laser, &config, q, &taus)?))?;
    let rows: Vec<Vec<Cell>> = (0..taus.len())
        .map(|k| {
            let g = series.normalized[k];
            vec![
                tau_over_t(taus[k], &config).into(),
                g.re.into(),
                g.im.into(),
                g.norm().into(),
                series.coh[k].re.into(),
                series.coh[k].im.into(),
                series.inc[k].re.into(),
                series.inc[k].im.into(),
            ]
        })
        .collect();
    run.csv(
        "g1.csv",
        &["tau_over_T", "re_g1", "im_g1", "abs_g1", "re_coh", "im_coh", "re_inc", "im_inc"],
        &rows,
    )?;

    // intensity build-up at whole periods
    let period = config.period();
    let grid = dipole.grid;
    let upto: Vec<usize> = (1..=config.n_cycles)
        .map(|c| grid.nearest(c as f64 * period))
        .collect();
    let buildup = run.timed("g1_equal_time", || {
        Ok(g1_equal_time(&dipole.samples, &model, &model.laser, &grid, config.omega_l, q, &upto)?)
    })?;
    let rows: Vec<Vec<Cell>> = upto
        .iter()
        .zip(&buildup)
        .map(|(&j, &g)| vec![(grid.point(j) / period).into(), g.into()])
        .collect();
    run.csv("g1_equal_time.csv", &["t_over_T", "g1_equal_time"], &rows)?;
    Ok(())
}

/// Offsets of `tau_samples` delays on a window of `steps` steps.
pub fn brute_force_offsets(steps: usize, tau_samples: usize) -> Vec<usize> {
    (0..tau_samples)
        .map(|k| ((k * steps) as f64 / (tau_samples - 1) as f64).round() as usize)
        .collect()
}

/// One-period window with `n_t` samples and the delays rounded onto it.
pub fn brute_force_grid(config: &RunConfig) -> Result<G2Grid> {
    let steps = config.n_t - 1;
    Ok(G2Grid::uniform(
        config.period(),
        steps,
        brute_force_offsets(steps, config.tau_samples),
    )?)
}

/// `<d(t)>` on the g2 grid, cached like the main dipole.
fn g2_dipole(run: &mut Run, model: &TransitionModel, grid: &G2Grid) -> Result<Vec<f64>> {
    let config = run.config().clone();
    let fine = grid.fine();
    let tag = format!("g2:{}:c{}", grid_tag(&fine), grid.coarsening);
    let hash = cache_key(&config, Kind::Dipole, &tag);
    let start = Instant::now();
    let cached = run.cache.dipole_or(hash, run.use_cache, || -> Result<_, RunError> {
        Ok(DipoleRecord {
            grid: fine,
            samples: dipole_on_grid(&model.laser, &model.atom, &model.momenta, grid)?,
            warmup_index: 0,
        })
    })?;
    run.manifest.timings.push(("g2_dipole".into(), start.elapsed()));
    run.note_cache("g2_dipole", &cached.hash, cached.hit, cached.discarded);
    Ok(cached.value.samples)
}

fn g2_rows(taus: &[f64], config: &RunConfig, g2: &[f64], num: &[hhg_core::C64], den: &[f64]) -> Vec<Vec<Cell>> {
    (0..taus.len())
        .map(|k| {
            vec![
                tau_over_t(taus[k], config).into(),
                g2[k].into(),
                num[k].re.into(),
                num[k].im.into(),
                den[k].into(),
            ]
        })
        .collect()
}

const G2_HEADER: [&str; 5] = ["tau_over_T", "g2", "re_num", "im_num", "denom"];
const TERMS_HEADER: [&str; 7] = ["tau_over_T", "re_coh", "im_coh", "re_cross", "im_cross", "re_cc", "im_cc"];

fn cmd_g2(run: &mut Run, brute_force: bool) -> Result<()> {
    let config = run.config().clone();
    let q = config.q;
    let model = TransitionModel::from_config(&config)?;
    if brute_force {
        let grid = brute_force_grid(&config)?;
        let cost = brute_force_cost(&grid, model.momenta.n);
        if cost > BRUTE_FORCE_BUDGET {
            bail!(
                "brute-force g2 refused: estimated {cost:.2e} integrand evaluations exceed the budget of \
                 {BRUTE_FORCE_BUDGET:.0e} (n_t = {}, n_els = {}, tau_samples = {}); use n_t <= 24 and n_els <= 40",
                config.n_t,
                config.n_els,
                config.tau_samples
            );
        }
        let dipole = g2_dipole(run, &model, &grid)?;
        let terms = run.timed("g2_brute_force", || {
            Ok(g2_brute_force(&model, &model.laser, &dipole, &grid, config.omega_l, q)?)
        })?;
        let taus: Vec<f64> = terms.iter().map(|t| t.tau).collect();
        let g2: Vec<f64> = terms.iter().map(|t| t.g2).collect();
        let num: Vec<_> = terms.iter().map(|t| t.numerator).collect();
        let den: Vec<f64> = terms.iter().map(|t| t.denominator).collect();
        if let Some(i) = den.iter().position(|&d| !(d > 0.0)) {
            bail!("degenerate mode: harmonic {q} has zero intensity at tau = {}", taus[i]);
        }
        run.csv("g2.csv", &G2_HEADER, &g2_rows(&taus, &config, &g2, &num, &den))?;
        let rows: Vec<Vec<Cell>> = terms
            .iter()
            .map(|t| {
                vec![
                    tau_over_t(t.tau, &config).into(),
                    t.t_coh.re.into(),
                    t.t_coh.im.into(),
                    t.t_cross.re.into(),
                    t.t_cross.im.into(),
                    t.t_cc.re.into(),
                    t.t_cc.im.into(),
                ]
            })
            .collect();
        run.csv("g2_terms.csv", &TERMS_HEADER, &rows)?;
        run.manifest.options.push(("path".into(), "brute-force".into()));
        return Ok(());
    }
    let grid = run.timed("g2_grid", || Ok(G2Grid::for_config(&config, q)?))?;
    let dipole = g2_dipole(run, &model, &grid)?;
    let kernels = run.timed("g2_kernels", || {
        Ok(g2_kernels(&model, &model.laser, &dipole, &grid, config.omega_l, &[q])?)
    })?;
    let c = kernels[0].components();
    c.check_denominator()?;
    let residue = c.imaginary_residue();
    run.manifest.notes.push(format!("imaginary residue of the numerator: {residue:e}"));
    run.csv("g2.csv", &G2_HEADER, &g2_rows(&c.taus, &config, &c.g2, &c.numerator, &c.denominator))?;
    let rows: Vec<Vec<Cell>> = (0..c.taus.len())
        .map(|k| {
            vec![
                tau_over_t(c.taus[k], &config).into(),
                c.t_coh[k].re.into(),
                c.t_coh[k].im.into(),
                c.t_cross[k].re.into(),
                c.t_cross[k].im.into(),
                c.t_cc[k].re.into(),
                c.t_cc[k].im.into(),
            ]
        })
        .collect();
    run.csv("g2_terms.csv", &TERMS_HEADER, &rows)?;
    run.manifest.options.push(("path".into(), "factorized".into()));
    Ok(())
}

fn cmd_sweep(run: &mut Run, n_atoms: &[u64]) -> Result<()> {
    let config = run.config().clone();
    let q = config.q;
    let atoms = if n_atoms.is_empty() { paper_atom_numbers() } else { n_atoms.to_vec() };
    let model = TransitionModel::from_config(&config)?;
    let grid = run.timed("g2_grid", || Ok(G2Grid::for_config(&config, q)?))?;
    let dipole = g2_dipole(run, &model, &grid)?;
    let kernels = run.timed("g2_kernels", || {
        Ok(g2_kernels(&model, &model.laser, &dipole, &grid, config.omega_l, &[q])?)
    })?;
    let kernels = &kernels[0];
    kernels.components().check_denominator()?;
    let series = sweep_n(kernels, &atoms)?;
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    for s in &series {
        let mut block = Vec::new();
        for (k, &tau) in kernels.taus.iter().enumerate() {
            let x = tau_over_t(tau, &config);
            rows.push(vec![
                Cell::from(s.scaling.n_atoms),
                x.into(),
                s.g2[k].into(),
                s.scaling.truncated().into(),
            ]);
            block.push(vec![x, s.g2[k]]);
        }
        blocks.push(PlotBlock {
            label: format!("N={}", s.scaling.n_atoms),
            rows: block,
        });
    }
    if series.iter().any(|s| s.scaling.truncated()) {
        run.manifest
            .notes
            .push("N < 4 rows are truncated: dropped lower-order emitter terms are not small".into());
    }
    run.csv("sweep.csv", &["n_atoms", "tau_over_T", "g2", "truncated"], &rows)?;
    let plot = PlotData {
        x_label: "tau / T".into(),
        y_label: "g2".into(),
        log_y: false,
        columns: vec!["tau_over_T".into(), "g2".into()],
        blocks,
    };
    run.plot("sweep.dat", &plot, 1)?;
    run.manifest.options.push((
        "n_atoms".into(),
        atoms.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
    ));
    Ok(())
}
