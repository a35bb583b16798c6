use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hhg::commands::{run, Command, Options};

#[derive(Parser)]
#[command(name = "hhg", version, about = "Quantum-optical correlation functions of high harmonic generation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Time-dependent dipole <d(t)> (dipole.csv)
    Dipole {
        #[command(flatten)]
        common: Common,
        /// Also compute and cache the transition table
        #[arg(long)]
        table: bool,
    },
    /// Coherent, incoherent and total spectra (spectrum.csv)
    Spectrum(Common),
    /// First-order coherence of harmonic q (g1.csv)
    G1(Common),
    /// Intensity correlation of harmonic q (g2.csv)
    G2(Common),
    /// g2 of harmonic q for several atom numbers (sweep.csv)
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Config file of key = value lines
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Harmonic order
    #[arg(long, value_name = "N")]
    q: Option<u32>,
    /// Number of emitters; repeat for sweep
    #[arg(long = "n-atoms", value_name = "N")]
    n_atoms: Vec<u64>,
    /// Literal four-time quadrature for g2 (coarse grids only)
    #[arg(long)]
    brute_force: bool,
    /// Neither read nor write cached dipoles
    #[arg(long)]
    no_cache: bool,
    /// Worker threads (default: all cores)
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Override a config key, e.g. --set n_els=400
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Also render plot data as SVG
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common, table) = match cli.command {
        Cmd::Dipole { common, table } => (Command::Dipole, common, table),
        Cmd::Spectrum(c) => (Command::Spectrum, c, false),
        Cmd::G1(c) => (Command::G1, c, false),
        Cmd::G2(c) => (Command::G2, c, false),
        Cmd::Sweep(c) => (Command::Sweep, c, false),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    let opts = Options {
        config: common.config,
        out: common.out,
        q: common.q,
        n_atoms: common.n_atoms,
        brute_force: common.brute_force,
        no_cache: common.no_cache,
        set: common.set,
        table,
        svg: common.svg,
        cache_dir: None,
    };
    match run(command, &opts) {
        Ok(summary) => {
            for p in &summary.outputs {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
