//! Honeycomb geometry, the effective z-link lattice and string paths.

mod effective;
mod honeycomb;
mod paths;

pub use effective::{EffSite, EffectiveLattice, Role, SpinFaces};
pub use honeycomb::{HoneycombLattice, Link, LinkType, Site, Sublattice};
pub use paths::{face_loop, fermion_loop, single_rotation, string_between, AnyonType, Endpoint, StringPath};

use serde::Serialize;

/// Combined description of a cluster for golden-file comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct LatticeDocument<'a> {
    pub nx: usize,
    pub ny: usize,
    pub sites: &'a [Site],
    pub links: &'a [Link],
    pub plaquettes: &'a [[usize; 6]],
    pub effective_spins: &'a [EffSite],
    pub effective_plaquettes: &'a [[usize; 4]],
}

impl<'a> LatticeDocument<'a> {
    pub fn new(lat: &'a HoneycombLattice, eff: &'a EffectiveLattice) -> Self {
        Self {
            nx: lat.nx(),
            ny: lat.ny(),
            sites: lat.sites(),
            links: lat.links(),
            plaquettes: lat.plaquettes(),
            effective_spins: eff.eff_sites(),
            effective_plaquettes: eff.plaquettes(),
        }
    }
}
