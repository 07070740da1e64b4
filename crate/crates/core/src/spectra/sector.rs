//! Block diagonalisation by a commuting group of Pauli symmetries.
//!
//! For an abelian group `G` generated by Hermitian, mutually commuting Pauli
//! strings, every character `s` of `G` gives a projector
//! `P_s = |G|^-1 Σ_g s(g) g`. Basis states fall into orbits under the bit
//! flips of `G`; each orbit has one representative `r`, and the vectors
//! `P_s |r>` (normalised) span the sector. A state `c` of the orbit obeys
//! `|c> = φ g |r>` for a tracked group element `g`, so
//! `P_s |c> = φ s(g) P_s |r>`, which is all that is needed to write the
//! Hamiltonian in the sector basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::HoneycombLattice;
use crate::pauli::PauliString;
use crate::scalar::{i_pow, Real, C};

use super::dense::hermitian_eigenvalues;
use super::lanczos::{lowest_eigenvalues, LanczosOptions};
use super::operator::{plaquette_flux, winding_loops, LinearOperator, Operator};
use super::Spectrum;

/// Group element with the set of generators it is built from.
#[derive(Copy, Clone, Debug)]
struct Element {
    op: PauliString,
    gens: u64,
}

impl Element {
    fn mul(&self, other: &Element) -> Element {
        Element { op: self.op.mul_unchecked(&other.op), gens: self.gens ^ other.gens }
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryReduction {
    n: usize,
    generators: Vec<PauliString>,
    /// Bit-flip basis in reduced echelon form: `(pivot bit, element)`.
    pivots: Vec<(u32, Element)>,
    pivot_mask: u64,
    /// Group elements acting diagonally.
    diagonal: Vec<Element>,
}

/// One symmetry sector: the representatives and `H` in CSR form.
#[derive(Clone, Debug)]
pub struct Sector<T> {
    /// Bit `i` set means generator `i` has eigenvalue `-1`.
    pub label: u64,
    reps: Vec<u64>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C<T>>,
}

/// Lowest levels of one sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorLevels {
    pub label: u64,
    pub dim: usize,
    pub energies: Vec<f64>,
}

impl SymmetryReduction {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        if generators.len() > 64 {
            return Err(Error::InvalidParameter("at most 64 generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::SpinCountMismatch(n, g.n()));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidParameter(format!("generator {g} is not Hermitian")));
            }
            if generators[..i].iter().any(|h| !h.commutes_with(g)) {
                return Err(Error::InvalidParameter(format!("generator {g} does not commute with the others")));
            }
        }
        let mut rows: Vec<Element> =
            generators.iter().enumerate().map(|(i, g)| Element { op: *g, gens: 1 << i }).collect();
        let mut pivots: Vec<(u32, Element)> = Vec::new();
        let mut diagonal = Vec::new();
        while let Some(mut e) = rows.pop() {
            for (bit, p) in &pivots {
                if e.op.x_mask() >> bit & 1 == 1 {
                    e = e.mul(p);
                }
            }
            if e.op.x_mask() == 0 {
                diagonal.push(e);
                continue;
            }
            let bit = e.op.x_mask().trailing_zeros();
            for (_, p) in pivots.iter_mut() {
                if p.op.x_mask() >> bit & 1 == 1 {
                    *p = p.mul(&e);
                }
            }
            pivots.push((bit, e));
        }
        pivots.sort_by_key(|(b, _)| *b);
        let pivot_mask = pivots.iter().fold(0, |m, (b, _)| m | 1u64 << b);
        Ok(Self { n, generators, pivots, pivot_mask, diagonal })
    }

    /// Plaquette fluxes and the two winding loops of a honeycomb torus.
    pub fn honeycomb(lat: &HoneycombLattice) -> Result<Self> {
        let mut g = (0..lat.num_cells()).map(|p| plaquette_flux(lat, p)).collect::<Result<Vec<_>>>()?;
        g.extend(winding_loops(lat)?);
        Self::new(lat.num_sites(), g)
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn num_labels(&self) -> u64 {
        1u64 << self.generators.len()
    }

    /// Representative of `c` with the phase `φ` and group element `g`
    /// (as a generator set) such that `|c> = φ g |r>`.
    fn reduce(&self, c: u64) -> (u64, u8, u64) {
        let mut g = Element { op: PauliString::identity(self.n).expect("n <= 64"), gens: 0 };
        let mut r = c;
        for (bit, p) in &self.pivots {
            if r >> bit & 1 == 1 {
                r ^= p.op.x_mask();
                g = p.mul(&g);
            }
        }
        // g |c> = i^e |r>  and g^2 = 1  give  |c> = i^e g |r>
        let (out, e) = g.op.apply_exp(c);
        debug_assert_eq!(out, r);
        (r, e, g.gens)
    }

    fn character(label: u64, gens: u64) -> bool {
        (label & gens).count_ones() % 2 == 1
    }

    fn admits(&self, label: u64, r: u64) -> bool {
        self.diagonal.iter().all(|d| {
            let (_, e) = d.op.apply_exp(r);
            debug_assert!(e % 2 == 0);
            (e == 2) == Self::character(label, d.gens)
        })
    }

    fn representatives(&self) -> Vec<u64> {
        let free: Vec<u32> = (0..self.n as u32).filter(|b| self.pivot_mask >> b & 1 == 0).collect();
        (0..1u64 << free.len())
            .map(|k| free.iter().enumerate().fold(0u64, |acc, (i, b)| acc | ((k >> i) & 1) << b))
            .collect()
    }

    /// `H` restricted to sector `label`; `None` if the sector is empty.
    pub fn sector<T: Real>(&self, h: &Operator<T>, label: u64) -> Result<Option<Sector<T>>> {
        if h.n() != self.n {
            return Err(Error::SpinCountMismatch(self.n, h.n()));
        }
        if let Some(g) = self.generators.iter().find(|g| !h.commutes_with(g)) {
            return Err(Error::InvalidParameter(format!("operator does not commute with {g}")));
        }
        let reps: Vec<u64> = self.representatives().into_iter().filter(|&r| self.admits(label, r)).collect();
        if reps.is_empty() {
            return Ok(None);
        }
        let mut row_ptr = vec![0];
        let (mut cols, mut vals) = (Vec::new(), Vec::new());
        let mut row: Vec<(usize, C<T>)> = Vec::new();
        // assemble by columns of H; H is Hermitian so row a of column b is
        // conj of the (b, a) entry, and we store rows directly as conj
        for &b in &reps {
            row.clear();
            for (w, p) in h.terms() {
                let (c, ph) = p.apply_exp(b);
                let (a, e, gens) = self.reduce(c);
                let sign: u8 = if Self::character(label, gens) { 2 } else { 0 };
                let idx = reps.binary_search(&a).map_err(|_| {
                    Error::InvalidParameter("term leaves the symmetry sector".into())
                })?;
                let z = i_pow::<T>(ph.wrapping_add(e).wrapping_add(sign)) * *w;
                row.push((idx, z.conj()));
            }
            row.sort_by_key(|(i, _)| *i);
            let mut last: Option<usize> = None;
            for &(i, z) in &row {
                if last == Some(i) {
                    *vals.last_mut().expect("entry exists") += z;
                } else {
                    cols.push(i);
                    vals.push(z);
                    last = Some(i);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Some(Sector { label, reps, row_ptr, cols, vals }))
    }

    /// Lowest `k` levels of every non-empty sector, computed in parallel and
    /// merged in ascending order.
    pub fn spectrum<T: Real>(&self, h: &Operator<T>, k: usize, opts: &LanczosOptions) -> Result<SectorSpectrum<T>> {
        let labels: Vec<u64> = (0..self.num_labels()).collect();
        let per: Vec<Option<(u64, usize, Spectrum<T>)>> = labels
            .par_iter()
            .map(|&label| -> Result<Option<(u64, usize, Spectrum<T>)>> {
                let Some(sec) = self.sector(h, label)? else { return Ok(None) };
                let s = sec.lowest(k, opts)?;
                Ok(Some((label, sec.dim(), s)))
            })
            .collect::<Result<_>>()?;
        let mut levels = Vec::new();
        let mut sectors = Vec::new();
        let mut complete_below = f64::INFINITY;
        for (label, dim, s) in per.into_iter().flatten() {
            if s.eigenvalues.len() < dim {
                if let Some(top) = s.eigenvalues.last() {
                    complete_below = complete_below.min(top.to_f64_lossy());
                }
            }
            for (e, r) in s.eigenvalues.iter().zip(&s.residuals) {
                levels.push((*e, *r, label));
            }
            sectors.push(SectorLevels {
                label,
                dim,
                energies: s.eigenvalues.iter().map(|e| e.to_f64_lossy()).collect(),
            });
        }
        levels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.2.cmp(&b.2)));
        let mut spec = Spectrum::new(levels.iter().map(|l| l.0).collect(), levels.iter().map(|l| l.1).collect(), 0);
        spec.sectors = levels.iter().map(|l| l.2).collect();
        Ok(SectorSpectrum { spectrum: spec, sectors, complete_below })
    }
}

/// Merged spectrum with per-sector detail.
#[derive(Clone, Debug)]
pub struct SectorSpectrum<T> {
    pub spectrum: Spectrum<T>,
    pub sectors: Vec<SectorLevels>,
    /// Top level of the most restrictive truncated sector: the merged list
    /// holds every eigenvalue strictly below it.
    pub complete_below: f64,
}

impl<T: Real> SectorSpectrum<T> {
    /// The merged levels that are known to be complete, with multiplicity.
    pub fn complete_levels(&self) -> Vec<f64> {
        let cut = self.complete_below;
        let all = self.spectrum.eigenvalues.iter().map(|e| e.to_f64_lossy());
        if cut.is_infinite() {
            return all.collect();
        }
        let slack = 1e-9 * cut.abs().max(1.0);
        all.filter(|&e| e < cut - slack).collect()
    }
}

impl<T: Real> Sector<T> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[u64] {
        &self.reps
    }

    /// Lowest `k` eigenvalues; small sectors are diagonalised densely.
    pub fn lowest(&self, k: usize, opts: &LanczosOptions) -> Result<Spectrum<T>> {
        let k = k.min(self.dim());
        if self.dim() <= 64 {
            let vals = hermitian_eigenvalues(&super::dense::to_dense(self))?;
            let mut s = Spectrum::new(vals[..k].to_vec(), vec![T::zero(); k], 1);
            s.iterations = 1;
            return Ok(s);
        }
        lowest_eigenvalues(self, k, opts)
    }
}

impl<T: Real> LinearOperator<T> for Sector<T> {
    fn dim(&self) -> usize {
        self.reps.len()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        for (a, ya) in y.iter_mut().enumerate() {
            let mut acc = C::new(T::zero(), T::zero());
            for idx in self.row_ptr[a]..self.row_ptr[a + 1] {
                acc += self.vals[idx] * x[self.cols[idx]];
            }
            *ya = acc;
        }
    }
}
