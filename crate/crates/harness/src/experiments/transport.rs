//! Trap formula, trap localisation and adiabatic one-anyon transport.

use std::path::{Path, PathBuf};

use honeycomb_anyons::dynamics::{adiabatic_transport, sudden_fidelity, trap_well, trapped_coupling, TransportRow};
use honeycomb_anyons::spectra::{assemble_effective, dense, effective_coupling};
use honeycomb_anyons::toric::State;
use honeycomb_anyons::{CouplingConfig, EffectiveLattice, TrapSchedule};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{num, write_json, Check, Table};

#[derive(Clone, Debug, Serialize)]
pub struct Run {
    /// In units of `1/J_eff`.
    pub ramp_time: f64,
    pub fidelity: Option<f64>,
    pub steps: usize,
    pub norm_drift: f64,
    /// `⟨Q_p⟩` at the end.
    pub fluxes: Vec<f64>,
    /// Sign of each flux.
    pub occupations: Vec<i8>,
    pub rows: Vec<TransportRow>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub waypoints: Vec<usize>,
    pub partner: usize,
    pub runs: Vec<Run>,
    pub sudden_fidelity: f64,
    pub checks: Vec<Check>,
}

/// `J_eff' = J_eff / 12` when one z-link is tripled, for a few couplings.
pub fn trap_formula_check() -> Result<Check> {
    let mut worst = 0.0f64;
    for (jx, jy, jz) in [(0.1, 0.1, 1.0), (0.3, 0.2, 1.0), (1.0, 1.0, 1.0), (0.05, 0.15, 2.0)] {
        let j_eff = effective_coupling(&CouplingConfig::new(jx, jy, jz))?;
        let trapped = trapped_coupling(jx, jy, jz, 3.0 * jz)?;
        worst = worst.max((12.0 * trapped - j_eff).abs() / j_eff);
    }
    Ok(Check::new(
        "trap_formula",
        worst <= 4.0 * f64::EPSILON,
        format!("|12 J_eff' - J_eff| / J_eff at most {worst:.1e} over four coupling sets"),
    ))
}

/// The lowest excited eigenspace of the trapped plaquette model carries
/// the flux at the trap.
pub fn trap_localisation_check(eff: &EffectiveLattice, j: f64, depth: f64, p: usize) -> Result<Check> {
    let couplings = trap_well(eff, &vec![j; eff.num_plaquettes()], p, depth)?;
    let h = assemble_effective(eff, &couplings)?;
    let (vals, vecs) = dense::hermitian_eigen(&dense::to_dense(&h))?;
    let tol = 1e-9;
    let ground = vals.iter().take_while(|v| **v - vals[0] <= tol).count();
    let first = vals[ground];
    let space: Vec<usize> = (ground..vals.len()).take_while(|&i| vals[i] - first <= tol).collect();
    let q = eff.plaquette_operators();
    let mut at_trap = Vec::new();
    let mut elsewhere = f64::INFINITY;
    for &i in &space {
        let s = State::new(eff.n_eff(), vecs[i].clone())?;
        for (f, op) in q.iter().enumerate() {
            let v = s.expectation(op)?.re;
            if f == p {
                at_trap.push(v);
            } else {
                elsewhere = elsewhere.min(v);
            }
        }
    }
    let worst = at_trap.iter().fold(0.0f64, |m, v| m.max((v + 1.0).abs()));
    Ok(Check::new(
        "trap_localises_excitation",
        worst < 1e-10 && elsewhere > -1.0 + 1e-6,
        format!(
            "first excited level {:.6} J_eff above ground ({} states): <Q_trap> = -1 to {worst:.1e}, other faces >= {elsewhere:.3}",
            (first - vals[0]) / j,
            space.len()
        ),
    ))
}

fn schedule(cfg: &ExperimentConfig, eff: &EffectiveLattice, ramp: f64) -> TrapSchedule {
    let t = &cfg.transport;
    let start = 0;
    let (c, r) = eff.face_display(start);
    let waypoints = (0..=t.hops as i64).map(|k| eff.face_at(c + 2 * k, r).expect("face")).collect();
    let partner = eff.face_at(c - 2, r).expect("face");
    TrapSchedule {
        waypoints,
        partner,
        j_eff: t.j_eff,
        depth: t.depth * t.j_eff,
        hopping: t.hopping * t.j_eff,
        ramp_time: ramp / t.j_eff,
        steps: t.steps,
    }
}

fn run_one(cfg: &ExperimentConfig, eff: &EffectiveLattice, ramp: f64) -> Run {
    let sched = schedule(cfg, eff, ramp);
    let outcome = sched
        .trapped_states(eff, 0)
        .and_then(|mut s| adiabatic_transport(eff, &s.remove(0), &sched));
    match outcome {
        Ok(r) => Run {
            ramp_time: ramp,
            fidelity: Some(r.fidelity),
            steps: r.steps,
            norm_drift: r.norm_drift,
            occupations: r.fluxes.iter().map(|q| if *q < 0.0 { -1 } else { 1 }).collect(),
            fluxes: r.fluxes,
            rows: r.rows,
            error: None,
        },
        Err(e) => Run {
            ramp_time: ramp,
            fidelity: None,
            steps: 0,
            norm_drift: f64::NAN,
            fluxes: Vec::new(),
            occupations: Vec::new(),
            rows: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

pub fn run_transport(cfg: &ExperimentConfig) -> Result<TransportReport> {
    let t = &cfg.transport;
    let eff = EffectiveLattice::new(t.nx, t.ny)?;
    let probe = schedule(cfg, &eff, 1.0);
    probe.validate(&eff)?;
    let runs: Vec<Run> = t.ramp_times.par_iter().map(|&ramp| run_one(cfg, &eff, ramp)).collect();
    let sudden = sudden_fidelity(&eff, &probe)?;

    let mut checks = vec![
        trap_formula_check()?,
        trap_localisation_check(&eff, t.j_eff, t.depth * t.j_eff, probe.waypoints[0])?,
    ];
    let mut still = probe.clone();
    still.waypoints.truncate(1);
    let init = still.trapped_states(&eff, 0)?.remove(0);
    let zero = adiabatic_transport(&eff, &init, &still)?;
    checks.push(Check::new(
        "transport_zero_length",
        (zero.fidelity - 1.0).abs() < 1e-12,
        format!("fidelity {} with the trap at rest", zero.fidelity),
    ));

    let mut ordered: Vec<&Run> = runs.iter().collect();
    ordered.sort_by(|a, b| a.ramp_time.total_cmp(&b.ramp_time));
    let fids: Vec<Option<f64>> = ordered.iter().map(|r| r.fidelity).collect();
    let monotone = fids.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if *b >= *a - 1e-9));
    let listing = ordered
        .iter()
        .map(|r| format!("T = {} → {}", num(r.ramp_time), r.fidelity.map_or_else(|| r.error.clone().unwrap_or_default(), |f| format!("{f:.6}"))))
        .collect::<Vec<_>>()
        .join(", ");
    checks.push(Check::new("transport_fidelity_nondecreasing", monotone && fids.iter().all(Option::is_some), listing.clone()));
    if let Some(slowest) = ordered.last() {
        let f = slowest.fidelity.unwrap_or(f64::NAN);
        checks.push(Check::new(
            "transport_adiabatic_success",
            f >= t.success,
            format!("F = {f:.6} at T = {} / J_eff (threshold {})", num(slowest.ramp_time), t.success),
        ));
        let end = *probe.waypoints.last().expect("waypoints");
        let occ = &slowest.occupations;
        let expected: Vec<i8> =
            (0..eff.num_plaquettes()).map(|p| if p == end || p == probe.partner { -1 } else { 1 }).collect();
        checks.push(Check::new(
            "transport_final_map",
            occ == &expected,
            format!("occupations {occ:?}, expected -1 at faces {end} and {} only", probe.partner),
        ));
    }
    let drift = runs.iter().map(|r| r.norm_drift).fold(0.0f64, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) });
    checks.push(Check::new("transport_norm_drift", drift < 1e-9, format!("largest norm drift {drift:.1e}")));
    Ok(TransportReport { waypoints: probe.waypoints, partner: probe.partner, runs, sudden_fidelity: sudden, checks })
}

impl TransportReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new("transport", 1, &["ramp_time", "hop", "time", "overlap", "norm_drift"]);
        for run in &self.runs {
            for r in &run.rows {
                t.push(vec![num(run.ramp_time), r.hop.to_string(), num(r.time), num(r.overlap), num(r.norm_drift)]);
            }
        }
        t
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        let runs: Vec<_> = self
            .runs
            .iter()
            .map(|r| {
                json!({
                    "ramp_time": r.ramp_time,
                    "fidelity": r.fidelity,
                    "steps": r.steps,
                    "norm_drift": r.norm_drift,
                    "fluxes": r.fluxes,
                    "occupations": r.occupations,
                    "error": r.error,
                })
            })
            .collect();
        Ok(vec![
            self.table().write(dir, "transport.csv")?,
            write_json(
                dir,
                "transport.json",
                &json!({
                    "experiment": "transport",
                    "config": cfg,
                    "waypoints": self.waypoints,
                    "partner": self.partner,
                    "sudden_fidelity": self.sudden_fidelity,
                    "runs": runs,
                    "datasets": ["transport.csv"],
                    "checks": self.checks,
                }),
            )?,
        ])
    }
}
