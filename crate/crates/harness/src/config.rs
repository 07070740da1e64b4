//! Run configuration, read from TOML. Every field has a default, so an empty
//! file (or none at all) describes the standard runs.

use std::path::{Path, PathBuf};

use honeycomb_anyons::spectra::{LanczosOptions, DEFAULT_CLUSTER_TOL};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seeds the Lanczos start vectors and the random loop geometries.
    pub seed: u64,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    pub output_dir: PathBuf,
    pub lattice: LatticeConfig,
    pub solver: SolverConfig,
    pub sweep: SweepConfig,
    pub scaling: ScalingConfig,
    pub spectrum: SpectrumConfig,
    pub anyons: AnyonConfig,
    pub transport: TransportConfig,
}

/// Unit cells of the microscopic torus used by the spectral experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeConfig {
    pub nx: usize,
    pub ny: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_krylov: usize,
    pub max_runs: usize,
    pub cluster_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub jz: f64,
    /// Grid points per axis over `[0, max]`.
    pub points: usize,
    pub max: f64,
    /// Slack allowed when comparing consecutive gaps along a ray.
    pub ray_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    pub jz: f64,
    /// Couplings `jx = jy = J`.
    pub j: Vec<f64>,
    pub fit_min: f64,
    pub fit_max: f64,
    pub slope_target: f64,
    pub slope_tol: f64,
    /// Allowed relative deviation from `4 J_eff` at the smallest `J`.
    pub deviation_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub j: f64,
    pub jz: f64,
    pub levels: usize,
    pub ratio_target: f64,
    pub ratio_tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnyonConfig {
    /// Effective torus for braiding, exchange and deformation checks.
    pub braid_nx: usize,
    pub braid_ny: usize,
    /// Effective torus for the controlled-phase register.
    pub gate_nx: usize,
    pub gate_ny: usize,
    /// Effective torus for the energy and one-qubit checks.
    pub small_nx: usize,
    pub small_ny: usize,
    pub deformations: usize,
    pub j_eff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransportConfig {
    pub nx: usize,
    pub ny: usize,
    pub j_eff: f64,
    /// Well depth in units of `J_eff`.
    pub depth: f64,
    /// Tunnelling on the hop spin in units of `J_eff`.
    pub hopping: f64,
    /// Ramp times in units of `1/J_eff`.
    pub ramp_times: Vec<f64>,
    pub steps: usize,
    /// Number of face moves for the trap.
    pub hops: usize,
    pub success: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            workers: 0,
            output_dir: PathBuf::from("out"),
            lattice: LatticeConfig::default(),
            solver: SolverConfig::default(),
            sweep: SweepConfig::default(),
            scaling: ScalingConfig::default(),
            spectrum: SpectrumConfig::default(),
            anyons: AnyonConfig::default(),
            transport: TransportConfig::default(),
        }
    }
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self { nx: 2, ny: 4 }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        let l = LanczosOptions::default();
        Self { tol: l.tol, max_krylov: l.max_krylov, max_runs: l.max_runs, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { jz: 1.0, points: 11, max: 1.0, ray_tol: 1e-9 }
    }
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            jz: 1.0,
            j: (5..=15).map(|i| i as f64 / 100.0).collect(),
            fit_min: 0.05,
            fit_max: 0.15,
            slope_target: 4.0,
            slope_tol: 0.1,
            deviation_tol: 0.05,
        }
    }
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { j: 0.1, jz: 1.0, levels: 30, ratio_target: 2.0, ratio_tol: 0.1 }
    }
}

impl Default for AnyonConfig {
    fn default() -> Self {
        Self { braid_nx: 6, braid_ny: 6, gate_nx: 4, gate_ny: 4, small_nx: 2, small_ny: 4, deformations: 10, j_eff: 1.0 }
    }
}

impl Default for TransportConfig {
    fn default() -> Self {
        Self {
            nx: 2,
            ny: 4,
            j_eff: 1.0,
            depth: 0.5,
            hopping: 0.1,
            ramp_times: vec![2.0, 20.0, 200.0],
            steps: 16,
            hops: 1,
            success: 0.99,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies `section.key=value` assignments, the value parsed as TOML
    /// (bare words fall back to strings).
    pub fn with_overrides(&self, assignments: &[String]) -> Result<Self> {
        let mut doc = toml::Value::try_from(self).map_err(|e| HarnessError::Config(e.to_string()))?;
        for a in assignments {
            let (key, raw) =
                a.split_once('=').ok_or_else(|| HarnessError::Config(format!("override {a:?} is not key=value")))?;
            let value = parse_value(raw.trim());
            let parts: Vec<&str> = key.trim().split('.').collect();
            let (last, sections) = parts.split_last().expect("split yields one part");
            let mut table = doc.as_table_mut().expect("config is a table");
            for part in sections {
                table = table
                    .get_mut(*part)
                    .and_then(toml::Value::as_table_mut)
                    .ok_or_else(|| HarnessError::Config(format!("{key}: no section {part}")))?;
            }
            if !table.contains_key(*last) {
                return Err(HarnessError::Config(format!("unknown setting {key}")));
            }
            table.insert(last.to_string(), value);
        }
        let text = toml::to_string(&doc).map_err(|e| HarnessError::Config(e.to_string()))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn lanczos(&self) -> LanczosOptions {
        LanczosOptions {
            tol: self.solver.tol,
            max_krylov: self.solver.max_krylov,
            max_runs: self.solver.max_runs,
            seed: self.seed,
            keep_vectors: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if !(self.solver.cluster_tol > 0.0 && self.solver.cluster_tol < 1.0) {
            return bad("solver.cluster_tol must lie in (0, 1)");
        }
        if !(self.solver.tol > 0.0) || self.solver.max_krylov < 2 || self.solver.max_runs == 0 {
            return bad("solver settings must be positive");
        }
        if self.sweep.points < 2 || !(self.sweep.max > 0.0) {
            return bad("sweep needs at least two points per axis and a positive range");
        }
        if self.scaling.j.iter().any(|j| !(*j > 0.0)) {
            return bad("scaling couplings must be positive");
        }
        if self.spectrum.levels < 2 {
            return bad("spectrum.levels must be at least 2");
        }
        if self.anyons.deformations == 0 {
            return bad("anyons.deformations must be positive");
        }
        if self.transport.ramp_times.iter().any(|t| !(*t > 0.0)) || self.transport.steps == 0 {
            return bad("transport ramp times and steps must be positive");
        }
        Ok(())
    }
}

fn parse_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), cfg);
    }

    #[test]
    fn overrides_and_errors() {
        let cfg = ExperimentConfig::default()
            .with_overrides(&["sweep.points=3".into(), "transport.ramp_times=[1.0]".into(), "seed=7".into()])
            .unwrap();
        assert_eq!(cfg.sweep.points, 3);
        assert_eq!(cfg.transport.ramp_times, vec![1.0]);
        assert_eq!(cfg.seed, 7);
        assert!(ExperimentConfig::default().with_overrides(&["sweep.nope=1".into()]).is_err());
        assert!(ExperimentConfig::default().with_overrides(&["sweep.points".into()]).is_err());
        assert!(ExperimentConfig::from_toml("[solver]\ncluster_tol = 2.0").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }
}
