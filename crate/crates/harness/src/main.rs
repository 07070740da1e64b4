use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use honeycomb_harness::{all_passed, plots, run, Experiment, ExperimentConfig, HarnessError};

/// Spectra, anyon and transport experiments on the honeycomb spin model.
///
/// Exit status: 0 when every check passes, 1 when a check fails or a run
/// errors, 2 on usage or configuration errors. Datasets are written even
/// when checks fail.
#[derive(Parser, Debug)]
#[command(name = "honeycomb-harness", version)]
struct Cli {
    /// TOML configuration; missing keys take the defaults listed below.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Directory for datasets and reports (overrides `output_dir`).
    #[arg(long, short, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override any setting, e.g. `--set sweep.points=5`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gap over a (jx, jy) grid with jz fixed.
    GapSweep {
        /// Grid points per axis.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Gap along jx = jy = J against the perturbative value, with a log-log fit.
    GapScaling {
        /// Comma-separated couplings.
        #[arg(long, value_delimiter = ',')]
        j: Option<Vec<f64>>,
    },
    /// Low-lying levels at one coupling, grouped into bands.
    Spectrum {
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Fusion, braiding, exchange, loop deformation and gate checks.
    Anyons {
        #[arg(long)]
        deformations: Option<usize>,
    },
    /// Adiabatic transport of a trapped anyon over a sweep of ramp times.
    Transport {
        /// Comma-separated ramp times in units of 1/J_eff.
        #[arg(long, value_delimiter = ',')]
        ramp_times: Option<Vec<f64>>,
        #[arg(long)]
        hops: Option<usize>,
    },
    /// Lanczos and Pauli algebra against dense matrices on small systems.
    Oracles,
    /// Plot scripts for datasets (default: every dataset in the output directory).
    Plots { datasets: Vec<PathBuf> },
}

fn list<T: ToString>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn configure(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let base = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut sets = Vec::new();
    if let Some(d) = &cli.output_dir {
        sets.push(format!("output_dir={:?}", d.display().to_string()));
    }
    if let Some(s) = cli.seed {
        sets.push(format!("seed={s}"));
    }
    if let Some(w) = cli.workers {
        sets.push(format!("workers={w}"));
    }
    sets.extend(cli.overrides.iter().cloned());
    match &cli.command {
        Command::GapSweep { points: Some(n) } => sets.push(format!("sweep.points={n}")),
        Command::GapScaling { j: Some(j) } => sets.push(format!("scaling.j={}", list(j))),
        Command::Spectrum { j, levels } => {
            sets.extend(j.map(|j| format!("spectrum.j={j:?}")));
            sets.extend(levels.map(|n| format!("spectrum.levels={n}")));
        }
        Command::Anyons { deformations: Some(n) } => sets.push(format!("anyons.deformations={n}")),
        Command::Transport { ramp_times, hops } => {
            sets.extend(ramp_times.as_ref().map(|t| format!("transport.ramp_times={}", list(&t.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>()))));
            sets.extend(hops.map(|n| format!("transport.hops={n}")));
        }
        _ => {}
    }
    base.with_overrides(&sets)
}

fn main() -> ExitCode {
    let defaults = format!("Default configuration:\n\n{}", ExperimentConfig::default().to_toml());
    let matches = Cli::command().after_long_help(defaults).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let cfg = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let experiment = match &cli.command {
        Command::GapSweep { .. } => Experiment::GapSweep,
        Command::GapScaling { .. } => Experiment::GapScaling,
        Command::Spectrum { .. } => Experiment::Spectrum,
        Command::Anyons { .. } => Experiment::Anyons,
        Command::Transport { .. } => Experiment::Transport,
        Command::Oracles => Experiment::Oracles,
        Command::Plots { datasets } => {
            let paths = if datasets.is_empty() { plots::plottable(&cfg.output_dir) } else { datasets.clone() };
            return match plots::emit_plot_scripts(&paths) {
                Ok(files) => {
                    files.iter().for_each(|f| println!("wrote {}", f.display()));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match run(&cfg, experiment, &cfg.output_dir) {
        Ok(outcome) => {
            outcome.checks.iter().for_each(|c| println!("{}", c.line()));
            outcome.files.iter().for_each(|f| println!("wrote {}", f.display()));
            if all_passed(&outcome.checks) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
