//! Gap map, gap scaling and band structure of the microscopic cluster.

use std::path::{Path, PathBuf};

use honeycomb_anyons::spectra::{bands, effective_coupling, honeycomb_gap, honeycomb_levels, perturbative_gap, GapKind, GapReport};
use honeycomb_anyons::{CouplingConfig, HoneycombLattice};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{num, write_json, Check, Table};

/// Levels per grid point written to the level table.
const LEVELS_PER_POINT: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct GapPoint {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub report: Option<GapReport>,
    pub error: Option<String>,
}

impl GapPoint {
    pub fn gap(&self) -> Option<f64> {
        self.report.as_ref().map(|r| r.multiplet.gap)
    }

    fn solve(lat: &HoneycombLattice, cfg: &ExperimentConfig, jx: f64, jy: f64, jz: f64) -> Self {
        let c = CouplingConfig::new(jx, jy, jz);
        match honeycomb_gap(lat, &c, cfg.solver.cluster_tol, &cfg.lanczos()) {
            Ok(r) => Self { jx, jy, jz, report: Some(r), error: None },
            Err(e) => Self { jx, jy, jz, report: None, error: Some(e.to_string()) },
        }
    }

    fn jeff(&self) -> f64 {
        effective_coupling(&CouplingConfig::new(self.jx, self.jy, self.jz)).unwrap_or(f64::NAN)
    }
}

fn lattice(cfg: &ExperimentConfig) -> Result<HoneycombLattice> {
    Ok(HoneycombLattice::new(cfg.lattice.nx, cfg.lattice.ny)?)
}

fn level_rows(t: &mut Table, p: &GapPoint) {
    if let Some(r) = &p.report {
        for (i, (e, res)) in r.levels.iter().zip(&r.residuals).take(LEVELS_PER_POINT).enumerate() {
            t.push(vec![num(p.jx), num(p.jy), num(p.jz), i.to_string(), num(*e), num(*res)]);
        }
    }
}

fn level_table() -> Table {
    Table::new("spectrum", 1, &["jx", "jy", "jz", "level_index", "energy", "residual"])
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub points: usize,
    /// Row-major over `(ix, iy)`.
    pub grid: Vec<GapPoint>,
    /// Whether the gap did not rise from the previous grid point on the ray
    /// through the origin; `None` outside `jx + jy <= max` and at the origin.
    pub ray_monotone: Vec<Option<bool>>,
    pub checks: Vec<Check>,
}

/// `ΔE` on a square `(jx, jy)` grid over `[0, max]²`.
pub fn run_gap_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let lat = lattice(cfg)?;
    let s = &cfg.sweep;
    let n = s.points;
    let at = |i: usize| s.max * i as f64 / (n - 1) as f64;
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|ix| (0..n).map(move |iy| (ix, iy))).collect();
    let grid: Vec<GapPoint> = idx.par_iter().map(|&(ix, iy)| GapPoint::solve(&lat, cfg, at(ix), at(iy), s.jz)).collect();

    let mut ray_monotone = vec![None; grid.len()];
    let mut violations = Vec::new();
    for &(ix, iy) in &idx {
        if ix + iy == 0 || ix + iy > n - 1 {
            continue;
        }
        let g = gcd(ix, iy);
        let prev = (ix - ix / g, iy - iy / g);
        let (here, before) = (&grid[ix * n + iy], &grid[prev.0 * n + prev.1]);
        if let (Some(a), Some(b)) = (here.gap(), before.gap()) {
            let ok = a <= b + s.ray_tol;
            if !ok {
                violations.push(format!("({}, {}): {a:.3e} > {b:.3e}", num(here.jx), num(here.jy)));
            }
            ray_monotone[ix * n + iy] = Some(ok);
        }
    }

    let mut checks = Vec::new();
    let failed: Vec<String> = grid.iter().filter(|p| p.error.is_some()).map(|p| format!("({}, {})", num(p.jx), num(p.jy))).collect();
    let min_gap = grid.iter().filter_map(GapPoint::gap).fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "sweep_gaps_positive",
        failed.is_empty() && min_gap > 0.0,
        format!("{} points, {} unsolved {:?}, smallest gap {min_gap:.3e}", grid.len(), failed.len(), failed),
    ));
    let evaluated = ray_monotone.iter().flatten().count();
    checks.push(Check::new(
        "sweep_rays_nonincreasing",
        violations.is_empty() && evaluated > 0,
        format!(
            "{} of {evaluated} ray steps rise{}",
            violations.len(),
            if violations.is_empty() { String::new() } else { format!(", first: {}", violations[..violations.len().min(5)].join("; ")) }
        ),
    ));
    if let Some(origin) = grid.first().filter(|p| p.jx == 0.0 && p.jy == 0.0) {
        let g = origin.gap().unwrap_or(f64::NAN);
        let want = 2.0 * s.jz;
        checks.push(Check::new("sweep_decoupled_gap", (g - want).abs() < 1e-9, format!("ΔE(0, 0) = {g} (expected {want})")));
    }
    if let Some(p) = grid.iter().find(|p| (p.jx - 0.1).abs() < 1e-12 && (p.jy - 0.1).abs() < 1e-12) {
        let g = p.gap().unwrap_or(f64::NAN);
        let want = 4.0 * p.jeff();
        let dev = (g - want).abs() / want;
        checks.push(Check::new(
            "sweep_weak_coupling_gap",
            dev <= 0.1,
            format!("ΔE(0.1, 0.1) = {g:.4e}, 4 J_eff = {want:.4e}, deviation {:.1}%", 100.0 * dev),
        ));
    }
    Ok(SweepResult { points: n, grid, ray_monotone, checks })
}

impl SweepResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "gap-sweep",
            1,
            &["jx", "jy", "jz", "gap", "gap_over_jeff", "multiplet", "ground_energy", "max_residual", "per_sector", "ray_monotone", "error"],
        );
        for (p, m) in self.grid.iter().zip(&self.ray_monotone) {
            let r = p.report.as_ref();
            t.push(vec![
                num(p.jx),
                num(p.jy),
                num(p.jz),
                r.map_or(String::new(), |r| num(r.multiplet.gap)),
                r.map_or(String::new(), |r| num(r.multiplet.gap / p.jeff())),
                r.map_or(String::new(), |r| r.multiplet.size.to_string()),
                r.map_or(String::new(), |r| num(r.ground_energy())),
                r.map_or(String::new(), |r| num(r.max_residual)),
                r.map_or(String::new(), |r| r.per_sector.to_string()),
                m.map_or(String::new(), |b| u8::from(b).to_string()),
                p.error.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut levels = level_table();
        self.grid.iter().for_each(|p| level_rows(&mut levels, p));
        Ok(vec![
            self.table().write(dir, "gap_sweep.csv")?,
            levels.write(dir, "gap_sweep_levels.csv")?,
            write_json(
                dir,
                "gap_sweep.json",
                &serde_json::json!({
                    "experiment": "gap-sweep",
                    "config": cfg,
                    "points_per_axis": self.points,
                    "datasets": ["gap_sweep.csv", "gap_sweep_levels.csv"],
                    "checks": self.checks,
                }),
            )?,
        ])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingResult {
    pub points: Vec<GapPoint>,
    pub perturbative: Vec<f64>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub checks: Vec<Check>,
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// `ΔE` along `jx = jy = J` against `4 J_eff`, with a log-log fit.
pub fn run_gap_scaling(cfg: &ExperimentConfig) -> Result<ScalingResult> {
    let lat = lattice(cfg)?;
    let s = &cfg.scaling;
    let points: Vec<GapPoint> = s.j.par_iter().map(|&j| GapPoint::solve(&lat, cfg, j, j, s.jz)).collect();
    let perturbative: Vec<f64> = s
        .j
        .iter()
        .map(|&j| perturbative_gap(&CouplingConfig::new(j, j, s.jz), GapKind::YZ))
        .collect::<std::result::Result<_, _>>()?;
    let in_fit = |j: f64| j >= s.fit_min - 1e-12 && j <= s.fit_max + 1e-12;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| in_fit(p.jx))
        .filter_map(|p| p.gap().filter(|g| *g > 0.0).map(|g| (p.jx.ln(), g.ln())))
        .unzip();
    let fit = fit_line(&lx, &ly);
    let mut checks = Vec::new();
    let unsolved = points.iter().filter(|p| p.error.is_some()).count();
    checks.push(Check::new("scaling_all_solved", unsolved == 0, format!("{unsolved} of {} points failed", points.len())));
    checks.push(match fit {
        Some((slope, _)) => Check::new(
            "scaling_loglog_slope",
            (slope - s.slope_target).abs() <= s.slope_tol,
            format!("slope {slope:.4} over J in [{}, {}] ({} points), target {} ± {}", s.fit_min, s.fit_max, lx.len(), s.slope_target, s.slope_tol),
        ),
        None => Check::new("scaling_loglog_slope", false, format!("only {} usable points in the fit window", lx.len())),
    });
    let deviation: Vec<Option<f64>> =
        points.iter().zip(&perturbative).map(|(p, w)| p.gap().map(|g| (g - w).abs() / w)).collect();
    let smallest = s.j.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i);
    if let Some(i) = smallest {
        let d = deviation[i];
        checks.push(Check::new(
            "scaling_weak_coupling_deviation",
            d.is_some_and(|d| d <= s.deviation_tol),
            format!(
                "J = {}: ΔE = {:.4e}, 4 J_eff = {:.4e}, deviation {}",
                s.j[i],
                points[i].gap().unwrap_or(f64::NAN),
                perturbative[i],
                d.map_or("n/a".into(), |d| format!("{:.1}% (limit {:.0}%)", 100.0 * d, 100.0 * s.deviation_tol))
            ),
        ));
    }
    let mut order: Vec<usize> = (0..s.j.len()).collect();
    order.sort_by(|&a, &b| s.j[b].total_cmp(&s.j[a]));
    let ordered: Vec<Option<f64>> = order.iter().map(|&i| deviation[i]).collect();
    let decreasing = ordered.windows(2).all(|w| matches!(w, [Some(a), Some(b)] if b <= a));
    checks.push(Check::new(
        "scaling_deviation_shrinks",
        decreasing,
        format!("deviation from large to small J: {:?}", ordered.iter().map(|d| d.map(|d| (d * 1e4).round() / 1e4)).collect::<Vec<_>>()),
    ));
    Ok(ScalingResult { points, perturbative, slope: fit.map(|f| f.0), intercept: fit.map(|f| f.1), checks })
}

impl ScalingResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(
            "gap-scaling",
            1,
            &["j", "jz", "gap", "perturbative", "relative_deviation", "multiplet", "max_residual", "error"],
        );
        for (p, w) in self.points.iter().zip(&self.perturbative) {
            let r = p.report.as_ref();
            t.push(vec![
                num(p.jx),
                num(p.jz),
                r.map_or(String::new(), |r| num(r.multiplet.gap)),
                num(*w),
                r.map_or(String::new(), |r| num((r.multiplet.gap - w).abs() / w)),
                r.map_or(String::new(), |r| r.multiplet.size.to_string()),
                r.map_or(String::new(), |r| num(r.max_residual)),
                p.error.clone().unwrap_or_default(),
            ]);
        }
        t
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut levels = level_table();
        self.points.iter().for_each(|p| level_rows(&mut levels, p));
        Ok(vec![
            self.table().write(dir, "gap_scaling.csv")?,
            levels.write(dir, "gap_scaling_levels.csv")?,
            write_json(
                dir,
                "gap_scaling.json",
                &serde_json::json!({
                    "experiment": "gap-scaling",
                    "config": cfg,
                    "slope": self.slope,
                    "intercept": self.intercept,
                    "datasets": ["gap_scaling.csv", "gap_scaling_levels.csv"],
                    "checks": self.checks,
                }),
            )?,
        ])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Band {
    pub first_level: usize,
    pub size: usize,
    pub bottom: f64,
    pub top: f64,
    /// Bottom of the band above the ground energy.
    pub excitation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub j_eff: f64,
    pub report: GapReport,
    pub bands: Vec<Band>,
    /// Excitation of the second band over that of the first.
    pub ratio: Option<f64>,
    pub checks: Vec<Check>,
}

/// Low-lying levels at `jx = jy = J`, grouped into bands.
pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<SpectrumResult> {
    let lat = lattice(cfg)?;
    let s = &cfg.spectrum;
    let c = CouplingConfig::new(s.j, s.j, s.jz);
    let j_eff = effective_coupling(&c)?;
    let report = honeycomb_levels(&lat, &c, s.levels, cfg.solver.cluster_tol, &cfg.lanczos())?;
    let e0 = report.ground_energy();
    let bands: Vec<Band> = bands(&report.levels, cfg.solver.cluster_tol)?
        .into_iter()
        .map(|r| Band {
            first_level: r.start,
            size: r.len(),
            bottom: report.levels[r.start],
            top: report.levels[r.end - 1],
            excitation: report.levels[r.start] - e0,
        })
        .collect();
    let ratio = (bands.len() >= 3).then(|| bands[2].excitation / bands[1].excitation);
    let mut checks = Vec::new();
    checks.push(Check::new(
        "spectrum_levels_resolved",
        report.levels.len() >= s.levels,
        format!("{} complete levels (requested {}), {} bands", report.levels.len(), s.levels, bands.len()),
    ));
    checks.push(Check::new(
        "spectrum_levels_above_ground",
        report.levels.iter().all(|e| *e >= e0),
        format!("ground energy {e0}"),
    ));
    if let Some(b) = bands.get(1) {
        let dev = (b.excitation - 4.0 * j_eff).abs() / (4.0 * j_eff);
        checks.push(Check::new(
            "spectrum_first_band",
            dev <= s.ratio_tol,
            format!("first band at {:.4} J_eff above ground (expected 4)", b.excitation / j_eff),
        ));
    }
    checks.push(match ratio {
        Some(r) => Check::new(
            "spectrum_band_ratio",
            (r - s.ratio_target).abs() <= s.ratio_tol * s.ratio_target,
            format!(
                "second band {:.4} J_eff, first {:.4} J_eff, ratio {r:.4} (target {} ± {:.0}%)",
                bands[2].excitation / j_eff,
                bands[1].excitation / j_eff,
                s.ratio_target,
                100.0 * s.ratio_tol
            ),
        ),
        None => Check::new("spectrum_band_ratio", false, format!("only {} bands resolved", bands.len())),
    });
    Ok(SpectrumResult { jx: s.j, jy: s.j, jz: s.jz, j_eff, report, bands, ratio, checks })
}

impl SpectrumResult {
    pub fn table(&self) -> Table {
        let mut t = level_table();
        for (i, (e, r)) in self.report.levels.iter().zip(&self.report.residuals).enumerate() {
            t.push(vec![num(self.jx), num(self.jy), num(self.jz), i.to_string(), num(*e), num(*r)]);
        }
        t
    }

    pub fn band_table(&self) -> Table {
        let mut t = Table::new("spectrum-bands", 1, &["band", "first_level", "size", "bottom", "top", "excitation", "excitation_over_jeff"]);
        for (i, b) in self.bands.iter().enumerate() {
            t.push(vec![
                i.to_string(),
                b.first_level.to_string(),
                b.size.to_string(),
                num(b.bottom),
                num(b.top),
                num(b.excitation),
                num(b.excitation / self.j_eff),
            ]);
        }
        t
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        Ok(vec![
            self.table().write(dir, "spectrum.csv")?,
            self.band_table().write(dir, "spectrum_bands.csv")?,
            write_json(
                dir,
                "spectrum.json",
                &serde_json::json!({
                    "experiment": "spectrum",
                    "config": cfg,
                    "j_eff": self.j_eff,
                    "ratio": self.ratio,
                    "bands": self.bands,
                    "datasets": ["spectrum.csv", "spectrum_bands.csv"],
                    "checks": self.checks,
                }),
            )?,
        ])
    }
}
