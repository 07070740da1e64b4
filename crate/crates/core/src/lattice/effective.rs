//! The effective square lattice of z-link spins.
//!
//! Each z-link becomes one effective spin (`|↑̃> = |↑↑>`, `|↓̃> = |↓↓>`) with
//! `σ̃^x = σ^x_A σ^x_B`, `σ̃^y = σ^y_A σ^x_B` and `σ̃^z = σ^z_A`. Effective spin
//! `j` is the z-link of cell `j` and face `p` is the hexagon of cell `p`.
//!
//! Positions are also given in display coordinates `(col, row)`: face `p`
//! sits at `(px - py, px + py)` and spin `j` at `(jx - jy - 1, jx + jy)`. In
//! that picture every spin has one face on each side, and face `p` has its
//! four spins to the left, above, right and below.

use serde::{Deserialize, Serialize};

use super::honeycomb::{wrap, HoneycombLattice, Sublattice};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

/// Position of an effective spin inside a plaquette operator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Left,
    Top,
    Right,
    Bottom,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::Left, Role::Top, Role::Right, Role::Bottom];

    /// Axis this role contributes to `Q_p = σ̃^y_L σ̃^z_T σ̃^y_R σ̃^z_B`.
    pub fn axis(self) -> Axis {
        match self {
            Role::Left | Role::Right => Axis::Y,
            Role::Top | Role::Bottom => Axis::Z,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffSite {
    pub z_link: usize,
    /// Microscopic A site carrying `σ̃^z`.
    pub first_site: usize,
    pub second_site: usize,
}

/// Faces around one effective spin.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinFaces {
    pub left: usize,
    pub right: usize,
    pub above: usize,
    pub below: usize,
}

impl SpinFaces {
    /// Faces flipped by `σ̃^z` on this spin.
    pub fn z_pair(&self) -> [usize; 2] {
        [self.left, self.right]
    }

    /// Faces flipped by `σ̃^y` on this spin.
    pub fn y_pair(&self) -> [usize; 2] {
        [self.below, self.above]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveLattice {
    nx: usize,
    ny: usize,
    eff_sites: Vec<EffSite>,
    /// `[left, top, right, bottom]` per face.
    plaquettes: Vec<[usize; 4]>,
    adjacency: Vec<SpinFaces>,
}

fn cell_shift(nx: usize, ny: usize, cell: usize, dx: i64, dy: i64) -> usize {
    let (cx, cy) = ((cell % nx) as i64, (cell / nx) as i64);
    wrap(cy + dy, ny) * nx + wrap(cx + dx, nx)
}

impl EffectiveLattice {
    pub fn from_honeycomb(lat: &HoneycombLattice) -> Result<Self> {
        let (nx, ny) = (lat.nx(), lat.ny());
        if lat.twist() != 0 {
            return Err(Error::InvalidParameter("effective lattice needs an untwisted torus".into()));
        }
        let n = lat.num_cells();
        if n > crate::pauli::MAX_SPINS {
            return Err(Error::TooManySpins(n, crate::pauli::MAX_SPINS));
        }
        let mut eff_sites = Vec::with_capacity(n);
        for (i, (idx, link)) in lat.links_of_type(super::LinkType::Z).enumerate() {
            let (a, b) = if lat.sites()[link.a].sublattice == Sublattice::A {
                (link.a, link.b)
            } else {
                (link.b, link.a)
            };
            debug_assert_eq!(idx, i);
            eff_sites.push(EffSite { z_link: idx, first_site: a, second_site: b });
        }
        let sh = |c: usize, dx: i64, dy: i64| cell_shift(nx, ny, c, dx, dy);
        let plaquettes = (0..n).map(|p| [p, sh(p, 1, 0), sh(p, 1, -1), sh(p, 0, -1)]).collect();
        let adjacency = (0..n)
            .map(|j| SpinFaces { left: sh(j, -1, 1), right: j, above: sh(j, 0, 1), below: sh(j, -1, 0) })
            .collect();
        let eff = Self { nx, ny, eff_sites, plaquettes, adjacency };
        eff.validate()?;
        Ok(eff)
    }

    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        Self::from_honeycomb(&HoneycombLattice::new(nx, ny)?)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_eff();
        let mut counts = vec![[0usize; 2]; n];
        for (p, members) in self.plaquettes.iter().enumerate() {
            for (role, &j) in Role::ALL.iter().zip(members) {
                counts[j][usize::from(role.axis() == Axis::Z)] += 1;
                let faces = self.adjacency[j];
                let ok = match role {
                    Role::Left => faces.right == p,
                    Role::Right => faces.left == p,
                    Role::Top => faces.below == p,
                    Role::Bottom => faces.above == p,
                };
                if !ok {
                    return Err(Error::InvalidParameter(format!("role map inconsistent at face {p}")));
                }
            }
        }
        if counts.iter().any(|c| *c != [2, 2]) {
            return Err(Error::InvalidParameter("spin not in two y-roles and two z-roles".into()));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn n_eff(&self) -> usize {
        self.eff_sites.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn eff_sites(&self) -> &[EffSite] {
        &self.eff_sites
    }

    pub fn plaquettes(&self) -> &[[usize; 4]] {
        &self.plaquettes
    }

    pub fn member(&self, p: usize, role: Role) -> usize {
        self.plaquettes[p][role as usize]
    }

    pub fn faces_of(&self, spin: usize) -> SpinFaces {
        self.adjacency[spin]
    }

    pub fn adjacency(&self) -> &[SpinFaces] {
        &self.adjacency
    }

    /// `Q_p = σ̃^y_L σ̃^z_T σ̃^y_R σ̃^z_B`.
    pub fn plaquette_operator(&self, p: usize) -> Result<PauliString> {
        let m = self.plaquettes.get(p).ok_or(Error::NoSuchPlaquette(p))?;
        let sites: Vec<(usize, Axis)> = Role::ALL.iter().map(|r| (m[*r as usize], r.axis())).collect();
        PauliString::from_sites(self.n_eff(), &sites)
    }

    pub fn plaquette_operators(&self) -> Vec<PauliString> {
        (0..self.num_plaquettes()).map(|p| self.plaquette_operator(p).expect("valid face")).collect()
    }

    /// Faces whose `Q_p` anticommutes with `op`, ascending.
    pub fn excited_by(&self, op: &PauliString) -> Vec<usize> {
        self.plaquette_operators()
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.commutes_with(op))
            .map(|(p, _)| p)
            .collect()
    }

    /// Effective single-spin operator, with `x` meaning `iσ̃^x`.
    pub fn spin_operator(&self, spin: usize, axis: Axis) -> Result<PauliString> {
        let p = PauliString::single(self.n_eff(), spin, axis)?;
        Ok(if axis == Axis::X { p.times_i_pow(1) } else { p })
    }

    pub fn face_display(&self, p: usize) -> (i64, i64) {
        let (px, py) = ((p % self.nx) as i64, (p / self.nx) as i64);
        (px - py, px + py)
    }

    pub fn spin_display(&self, j: usize) -> (i64, i64) {
        let (jx, jy) = ((j % self.nx) as i64, (j / self.nx) as i64);
        (jx - jy - 1, jx + jy)
    }

    /// Face at display coordinates, wrapped onto the torus.
    pub fn face_at(&self, col: i64, row: i64) -> Option<usize> {
        if (col - row).rem_euclid(2) != 0 {
            return None;
        }
        let px = (col + row).div_euclid(2);
        let py = (row - col).div_euclid(2);
        Some(wrap(py, self.ny) * self.nx + wrap(px, self.nx))
    }

    /// Spin at display coordinates, wrapped onto the torus.
    pub fn spin_at(&self, col: i64, row: i64) -> Option<usize> {
        if (col - row).rem_euclid(2) != 1 {
            return None;
        }
        let jx = (col + row + 1).div_euclid(2);
        let jy = (row - col - 1).div_euclid(2);
        Some(wrap(jy, self.ny) * self.nx + wrap(jx, self.nx))
    }

    pub(crate) fn shift_face(&self, p: usize, dx: i64, dy: i64) -> usize {
        cell_shift(self.nx, self.ny, p, dx, dy)
    }

    /// Horizontal face move: the neighbour face and the spin whose `σ̃^z` links them.
    pub(crate) fn step_horizontal(&self, p: usize, forward: bool) -> (usize, usize) {
        if forward {
            let next = self.shift_face(p, 1, -1);
            (next, next)
        } else {
            (self.shift_face(p, -1, 1), p)
        }
    }

    /// Vertical face move: the neighbour face and the spin whose `σ̃^y` links them.
    pub(crate) fn step_vertical(&self, p: usize, forward: bool) -> (usize, usize) {
        if forward {
            (self.shift_face(p, 1, 1), self.shift_face(p, 1, 0))
        } else {
            (self.shift_face(p, -1, -1), self.shift_face(p, 0, -1))
        }
    }

    /// Checkerboard class of a face; `None` when the torus does not support
    /// a consistent two-colouring.
    pub fn face_class(&self, p: usize) -> Option<u8> {
        if self.nx % 2 == 1 || self.ny % 2 == 1 {
            return None;
        }
        Some((((p % self.nx) + (p / self.nx)) % 2) as u8)
    }
}
