//! Experiment recipes, configuration and dataset emission for the
//! honeycomb-anyons toolkit.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod plots;

use std::path::{Path, PathBuf};

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use output::{all_passed, Check};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Experiment {
    GapSweep,
    GapScaling,
    Spectrum,
    Anyons,
    Transport,
    Oracles,
}

/// Checks of a finished run and the files it wrote.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

/// Runs one experiment on a pool of `cfg.workers` threads and writes its
/// datasets under `dir`.
pub fn run(cfg: &ExperimentConfig, experiment: Experiment, dir: &Path) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    pool.install(|| run_here(cfg, experiment, dir))
}

fn run_here(cfg: &ExperimentConfig, experiment: Experiment, dir: &Path) -> Result<Outcome> {
    use experiments::*;
    let (checks, files) = match experiment {
        Experiment::GapSweep => {
            let r = run_gap_sweep(cfg)?;
            (r.checks.clone(), r.write(cfg, dir)?)
        }
        Experiment::GapScaling => {
            let r = run_gap_scaling(cfg)?;
            (r.checks.clone(), r.write(cfg, dir)?)
        }
        Experiment::Spectrum => {
            let r = run_spectrum(cfg)?;
            (r.checks.clone(), r.write(cfg, dir)?)
        }
        Experiment::Anyons => {
            let r = run_anyon_suite(cfg)?;
            (r.checks(), r.write(cfg, dir)?)
        }
        Experiment::Transport => {
            let r = run_transport(cfg)?;
            (r.checks.clone(), r.write(cfg, dir)?)
        }
        Experiment::Oracles => {
            let (cases, checks) = run_oracles(cfg.seed)?;
            let file = output::write_json(
                dir,
                "oracles.json",
                &serde_json::json!({ "experiment": "oracles", "config": cfg, "cases": cases, "checks": checks }),
            )?;
            (checks, vec![file])
        }
    };
    Ok(Outcome { checks, files })
}
