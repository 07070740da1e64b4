//! Matrix-free operators, eigensolvers and gap analysis.

pub mod dense;
mod lanczos;
mod operator;
mod sector;
pub mod tridiag;

pub use lanczos::{lowest_eigenvalues, LanczosOptions};
pub use operator::{
    assemble_effective, assemble_honeycomb, plaquette_flux, winding_loops, Couplings, LinearOperator, Operator,
    MAX_DENSE_SPINS,
};
pub use sector::{Sector, SectorLevels, SectorSpectrum, SymmetryReduction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Default relative threshold for grouping the ground multiplet.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-3;
/// Spacings at or below this are always treated as degeneracies.
pub const DEGENERACY_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// `|H v - λ v|` per level.
    pub residuals: Vec<T>,
    /// Krylov runs (or 1 for dense solves).
    pub iterations: usize,
    /// Eigenvectors, when requested.
    pub vectors: Vec<Vec<C<T>>>,
    /// Symmetry-sector label per level, when computed by sectors.
    pub sectors: Vec<u64>,
}

/// Ground multiplet and the gap above it.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multiplet {
    pub size: usize,
    pub spread: f64,
    pub gap: f64,
}

impl<T: Real> Spectrum<T> {
    pub fn new(eigenvalues: Vec<T>, residuals: Vec<T>, iterations: usize) -> Self {
        Self { eigenvalues, residuals, iterations, vectors: Vec::new(), sectors: Vec::new() }
    }

    pub fn ground_energy(&self) -> Option<T> {
        self.eigenvalues.first().copied()
    }

    pub fn ground_multiplet(&self, cluster_tol: f64) -> Result<Multiplet> {
        let e: Vec<f64> = self.eigenvalues.iter().map(|v| v.to_f64_lossy()).collect();
        ground_multiplet(&e, cluster_tol)
    }
}

/// Splits off the lowest cluster. A spacing counts as internal when it is at
/// most the degeneracy floor or below `cluster_tol` times the spacing that
/// follows it (the candidate gap); the first spacing that is neither opens
/// the gap.
pub fn ground_multiplet(levels: &[f64], cluster_tol: f64) -> Result<Multiplet> {
    if !(cluster_tol > 0.0 && cluster_tol < 1.0) {
        return Err(Error::InvalidParameter(format!("cluster tolerance {cluster_tol} outside (0, 1)")));
    }
    let spacing: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    for (i, &s) in spacing.iter().enumerate() {
        if s <= DEGENERACY_FLOOR {
            continue;
        }
        let next = spacing[i + 1..].iter().copied().find(|&t| t > DEGENERACY_FLOOR);
        if next.map_or(true, |t| s >= cluster_tol * t) {
            return Ok(Multiplet { size: i + 1, spread: levels[i] - levels[0], gap: s });
        }
    }
    Err(Error::GapUndetectable(levels.len()))
}

/// `ΔE` between the top of the ground multiplet and the next level.
pub fn gap_above_ground_multiplet<T: Real>(s: &Spectrum<T>, cluster_tol: f64) -> Result<T> {
    Ok(T::of(s.ground_multiplet(cluster_tol)?.gap))
}

/// Splits ascending levels into bands by applying the ground-multiplet rule
/// repeatedly. The trailing levels, whose upper edge is not resolved, are
/// dropped.
pub fn bands(levels: &[f64], cluster_tol: f64) -> Result<Vec<std::ops::Range<usize>>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start + 1 < levels.len() {
        match ground_multiplet(&levels[start..], cluster_tol) {
            Ok(m) => {
                out.push(start..start + m.size);
                start += m.size;
            }
            Err(Error::GapUndetectable(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Low-lying spectrum of a microscopic cluster and the gap above its ground
/// multiplet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// Every level below the completeness cutoff, ascending.
    pub levels: Vec<f64>,
    /// `|H v - λ v|` per level (zero for densely solved sectors).
    pub residuals: Vec<f64>,
    pub multiplet: Multiplet,
    /// Levels computed per symmetry sector.
    pub per_sector: usize,
    pub max_residual: f64,
}

impl GapReport {
    pub fn ground_energy(&self) -> f64 {
        self.levels[0]
    }
}

/// Gap of the honeycomb Hamiltonian, solved sector by sector over the
/// plaquette fluxes and winding loops. The number of levels per sector is
/// doubled until the gap and one spacing beyond it are resolved.
pub fn honeycomb_gap(
    lat: &crate::lattice::HoneycombLattice,
    c: &Couplings<f64>,
    cluster_tol: f64,
    opts: &LanczosOptions,
) -> Result<GapReport> {
    resolve(lat, c, opts, |levels| match ground_multiplet(levels, cluster_tol) {
        Ok(m) if m.size + 1 < levels.len() => Ok(Some(m)),
        Ok(_) | Err(Error::GapUndetectable(_)) => Ok(None),
        Err(e) => Err(e),
    })
}

/// At least `min_levels` complete low-lying levels of the honeycomb
/// Hamiltonian, by the same sector route as [`honeycomb_gap`].
pub fn honeycomb_levels(
    lat: &crate::lattice::HoneycombLattice,
    c: &Couplings<f64>,
    min_levels: usize,
    cluster_tol: f64,
    opts: &LanczosOptions,
) -> Result<GapReport> {
    resolve(lat, c, opts, |levels| {
        if levels.len() < min_levels {
            return Ok(None);
        }
        match ground_multiplet(levels, cluster_tol) {
            Ok(m) => Ok(Some(m)),
            Err(Error::GapUndetectable(_)) => Ok(None),
            Err(e) => Err(e),
        }
    })
}

fn resolve(
    lat: &crate::lattice::HoneycombLattice,
    c: &Couplings<f64>,
    opts: &LanczosOptions,
    accept: impl Fn(&[f64]) -> Result<Option<Multiplet>>,
) -> Result<GapReport> {
    const MAX_PER_SECTOR: usize = 64;
    let h = assemble_honeycomb(lat, c)?;
    let red = SymmetryReduction::honeycomb(lat)?;
    let mut k = 2;
    loop {
        let s = red.spectrum(&h, k, opts)?;
        let levels = s.complete_levels();
        if let Some(m) = accept(&levels)? {
            let residuals: Vec<f64> = s.spectrum.residuals[..levels.len()].iter().map(|r| r.to_f64_lossy()).collect();
            let max_residual = residuals.iter().fold(0.0f64, |a, r| a.max(*r));
            return Ok(GapReport { levels, residuals, multiplet: m, per_sector: k, max_residual });
        }
        if k >= MAX_PER_SECTOR || s.complete_below.is_infinite() {
            return Err(Error::GapUndetectable(levels.len()));
        }
        k *= 2;
    }
}

/// Excitation kinds of the plaquette model.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapKind {
    /// A `Y` or `Z` pair: two excited plaquettes.
    YZ,
    /// A fermion pair: four excited plaquettes.
    X,
}

/// `J_eff = jx² jy² / (16 jz³)`.
pub fn effective_coupling<T: Real>(c: &Couplings<T>) -> Result<T> {
    if c.jz == T::zero() {
        return Err(Error::InvalidParameter("jz must be nonzero".into()));
    }
    if [c.jx, c.jy, c.jz].iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteCoupling);
    }
    Ok(c.jx * c.jx * c.jy * c.jy / (T::of(16.0) * c.jz * c.jz * c.jz))
}

/// Gap of the plaquette model: `4 J_eff` for `Y`/`Z`, `8 J_eff` for `X`.
pub fn perturbative_gap<T: Real>(c: &Couplings<T>, kind: GapKind) -> Result<T> {
    let j = effective_coupling(c)?;
    Ok(match kind {
        GapKind::YZ => T::of(4.0) * j,
        GapKind::X => T::of(8.0) * j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::HoneycombLattice;

    #[test]
    fn bands_split_on_the_same_rule() {
        let b = bands(&[0.0, 0.0, 1.0, 1.001, 3.0, 3.0, 7.0], DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(b, vec![0..2, 2..4, 4..6]);
    }

    #[test]
    fn sector_gap_matches_full_solve() {
        let lat = HoneycombLattice::new(2, 2).unwrap();
        let c = Couplings::new(0.3, 0.2, 1.0);
        let r = honeycomb_gap(&lat, &c, DEFAULT_CLUSTER_TOL, &LanczosOptions::default()).unwrap();
        let full = dense::hermitian_eigenvalues(&dense::to_dense(&assemble_honeycomb(&lat, &c).unwrap())).unwrap();
        let m = ground_multiplet(&full, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(r.multiplet.size, m.size);
        assert!((r.multiplet.gap - m.gap).abs() < 1e-10);
        for (a, b) in r.levels.iter().zip(&full) {
            assert!((a - b).abs() < 1e-10);
        }
        let d = honeycomb_gap(&lat, &Couplings::new(0.0, 0.0, 1.0), DEFAULT_CLUSTER_TOL, &LanczosOptions::default()).unwrap();
        assert_eq!(d.multiplet.size, 16);
        assert!((d.multiplet.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clustering_rule() {
        let m = ground_multiplet(&[-8.0, -8.0, -8.0, -6.0, -6.0], DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!((m.size, m.gap), (3, 2.0));
        let m = ground_multiplet(&[0.0, 1e-8, 1.0], DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(m.size, 2);
        let m = ground_multiplet(&[0.0, 0.1, 1.0], DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(m.size, 1);
        assert_eq!(ground_multiplet(&[1.0, 1.0], DEFAULT_CLUSTER_TOL), Err(Error::GapUndetectable(2)));
    }

    #[test]
    fn perturbative_values() {
        let c = Couplings::new(1.0, 1.0, 1.0);
        assert_eq!(effective_coupling(&c).unwrap(), 1.0 / 16.0);
        assert_eq!(perturbative_gap(&c, GapKind::YZ).unwrap(), 0.25);
        assert_eq!(perturbative_gap(&c, GapKind::X).unwrap(), 0.5);
        assert_eq!(perturbative_gap(&Couplings::new(0.0, 0.7, 1.0), GapKind::YZ).unwrap(), 0.0);
        assert!(perturbative_gap(&Couplings::new(1.0, 1.0, 0.0), GapKind::X).is_err());
    }
}
