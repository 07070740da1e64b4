use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{EffectiveLattice, HoneycombLattice, LinkType};
use crate::pauli::{Axis, PauliString};
use crate::scalar::{i_pow, Real, C};

/// Largest microscopic cluster we are willing to store a state vector for.
pub const MAX_DENSE_SPINS: usize = 26;

/// A linear map on complex vectors of fixed dimension.
pub trait LinearOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C<T>], y: &mut [C<T>]);
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings<T> {
    pub jx: T,
    pub jy: T,
    pub jz: T,
    /// Link index -> coupling, replacing the type default.
    #[serde(default)]
    pub overrides: BTreeMap<usize, T>,
}

impl<T: Real> Couplings<T> {
    pub fn new(jx: T, jy: T, jz: T) -> Self {
        Self { jx, jy, jz, overrides: BTreeMap::new() }
    }

    pub fn with_override(mut self, link: usize, value: T) -> Self {
        self.overrides.insert(link, value);
        self
    }

    fn for_type(&self, kind: LinkType) -> T {
        match kind {
            LinkType::X => self.jx,
            LinkType::Y => self.jy,
            LinkType::Z => self.jz,
        }
    }
}

/// Weighted sum of Hermitian Pauli strings, applied matrix-free.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    n: usize,
    terms: Vec<(T, PauliString)>,
}

impl<T: Real> Operator<T> {
    pub fn new(n: usize, terms: Vec<(T, PauliString)>) -> Result<Self> {
        for (w, p) in &terms {
            if p.n() != n {
                return Err(Error::SpinCountMismatch(n, p.n()));
            }
            if !p.is_hermitian() {
                return Err(Error::InvalidParameter(format!("term {p} is not Hermitian")));
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteCoupling);
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(T, PauliString)] {
        &self.terms
    }

    pub fn push(&mut self, weight: T, p: PauliString) -> Result<()> {
        let mut tmp = Operator::new(self.n, vec![(weight, p)])?;
        self.terms.append(&mut tmp.terms);
        Ok(())
    }

    /// Sum of `|weight|`, a bound on the spectral radius.
    pub fn norm_bound(&self) -> T {
        self.terms.iter().map(|(w, _)| w.abs()).sum()
    }

    /// `<row| H |col>`.
    pub fn matrix_element(&self, row: u64, col: u64) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for (w, p) in &self.terms {
            let (out, ph) = p.apply::<T>(col);
            if out == row {
                acc += ph * *w;
            }
        }
        acc
    }

    /// True if every term has an even number of `Y` factors, so all matrix
    /// elements are real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, p)| (p.x_mask() & p.z_mask()).count_ones() % 2 == 0)
    }

    pub fn commutes_with(&self, g: &PauliString) -> bool {
        // Pauli terms either commute or anticommute; anticommuting pieces must cancel
        // in the sum, which for distinct strings cannot happen, so test termwise.
        self.terms.iter().all(|(w, p)| *w == T::zero() || p.commutes_with(g))
    }

    fn check_dim(&self) -> usize {
        assert!(self.n <= MAX_DENSE_SPINS, "{} spins exceed the dense limit", self.n);
        1usize << self.n
    }
}

impl<T: Real> LinearOperator<T> for Operator<T> {
    fn dim(&self) -> usize {
        self.check_dim()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        // gather form: y[c] = sum_t w_t <c|P_t|c ^ x_t> x[c ^ x_t]
        let coeffs: Vec<(u64, u64, [C<T>; 2])> = self
            .terms
            .iter()
            .map(|(w, p)| {
                let base: C<T> = i_pow::<T>(p.phase_exp()) * *w;
                (p.x_mask(), p.z_mask(), [base, -base])
            })
            .collect();
        const CHUNK: usize = 1 << 12;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            let offset = ci * CHUNK;
            for (k, yc) in chunk.iter_mut().enumerate() {
                let c = (offset + k) as u64;
                let mut acc = C::new(T::zero(), T::zero());
                for (xm, zm, coef) in &coeffs {
                    let b = c ^ xm;
                    let sign = ((zm & b).count_ones() & 1) as usize;
                    acc += coef[sign] * x[b as usize];
                }
                *yc = acc;
            }
        });
    }
}

/// Three-coupling honeycomb Hamiltonian: `-J_t σ^t σ^t` on every t-link.
pub fn assemble_honeycomb<T: Real>(lat: &HoneycombLattice, c: &Couplings<T>) -> Result<Operator<T>> {
    let n = lat.num_sites();
    if [c.jx, c.jy, c.jz].iter().any(|v| !v.is_finite()) || c.overrides.values().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteCoupling);
    }
    if let Some((&bad, _)) = c.overrides.iter().find(|(&l, _)| l >= lat.links().len()) {
        return Err(Error::NoSuchLink(bad));
    }
    let mut terms = Vec::with_capacity(lat.links().len());
    for (i, link) in lat.links().iter().enumerate() {
        let axis = match link.kind {
            LinkType::X => Axis::X,
            LinkType::Y => Axis::Y,
            LinkType::Z => Axis::Z,
        };
        let j = c.overrides.get(&i).copied().unwrap_or_else(|| c.for_type(link.kind));
        terms.push((-j, PauliString::from_sites(n, &[(link.a, axis), (link.b, axis)])?));
    }
    Operator::new(n, terms)
}

/// Plaquette model `-sum_p j_p Q_p`.
pub fn assemble_effective<T: Real>(eff: &EffectiveLattice, j_p: &[T]) -> Result<Operator<T>> {
    if j_p.len() != eff.num_plaquettes() {
        return Err(Error::CouplingCount { expected: eff.num_plaquettes(), got: j_p.len() });
    }
    let terms = eff.plaquette_operators().into_iter().zip(j_p).map(|(q, &j)| (-j, q)).collect();
    Operator::new(eff.n_eff(), terms)
}

/// Microscopic plaquette operator `W_p`: on each hexagon site the Pauli of
/// the link pointing out of the hexagon.
pub fn plaquette_flux(lat: &HoneycombLattice, p: usize) -> Result<PauliString> {
    let ring = lat.plaquettes().get(p).ok_or(Error::NoSuchPlaquette(p))?;
    let mut sites = Vec::with_capacity(6);
    for i in 0..6 {
        let (prev, s, next) = (ring[(i + 5) % 6], ring[i], ring[(i + 1) % 6]);
        let kind = lat.outer_link_type(s, prev, next).expect("hexagon site has an outer link");
        let axis = match kind {
            LinkType::X => Axis::X,
            LinkType::Y => Axis::Y,
            LinkType::Z => Axis::Z,
        };
        sites.push((s, axis));
    }
    PauliString::from_sites(lat.num_sites(), &sites)
}

/// Product of link operators around the two non-contractible cycles
/// (z/x links along `a1`, z/y links along `a2`), made Hermitian.
pub fn winding_loops(lat: &HoneycombLattice) -> Result<[PauliString; 2]> {
    let n = lat.num_sites();
    let link_op = |l: usize| -> Result<PauliString> {
        let link = lat.links()[l];
        let axis = match link.kind {
            LinkType::X => Axis::X,
            LinkType::Y => Axis::Y,
            LinkType::Z => Axis::Z,
        };
        PauliString::from_sites(n, &[(link.a, axis), (link.b, axis)])
    };
    let cells = lat.num_cells();
    let mut out = Vec::with_capacity(2);
    // around a2 the twist leaves us `twist` cells short along a1
    let routes = [vec![(LinkType::X, lat.nx())], vec![(LinkType::Y, lat.ny()), (LinkType::X, lat.twist())]];
    for route in routes {
        let mut acc = PauliString::identity(n)?;
        let mut cell = 0;
        for (second, steps) in route {
            for _ in 0..steps {
                acc = acc.multiply(&link_op(cell)?)?;
                let (dx, dy, offset) = if second == LinkType::X { (1, 0, 1) } else { (0, 1, 2) };
                let next = lat.shift_cell(cell, dx, dy);
                // the second-type link of the next cell joins B(cell) to A(next)
                acc = acc.multiply(&link_op(cells * offset + next)?)?;
                cell = next;
            }
        }
        if !acc.is_hermitian() {
            acc = acc.times_i_pow(1);
        }
        out.push(acc);
    }
    Ok([out[0], out[1]])
}
