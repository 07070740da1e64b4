//! Periodic honeycomb clusters in the brick-wall embedding.
//!
//! Unit cell `r = (cx, cy)` holds an `A` and a `B` site joined by a vertical
//! z-link. `A(r)` is also bonded to `B(r - a1)` by an x-link and to
//! `B(r - a2)` by a y-link. The face attached to cell `r` is the hexagon
//! `A(r) B(r) A(r+a1) B(r+a1-a2) A(r+a1-a2) B(r-a2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkType {
    X,
    Y,
    Z,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub cell: (usize, usize),
    pub sublattice: Sublattice,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub kind: LinkType,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoneycombLattice {
    nx: usize,
    ny: usize,
    /// Cells `(cx + twist, cy + ny)` and `(cx, cy)` coincide.
    #[serde(default)]
    twist: usize,
    sites: Vec<Site>,
    /// z-links first (index = cell), then x-links, then y-links.
    links: Vec<Link>,
    /// Ordered six-site rings, one per cell.
    plaquettes: Vec<[usize; 6]>,
}

pub(crate) fn wrap(v: i64, n: usize) -> usize {
    v.rem_euclid(n as i64) as usize
}

pub(crate) fn shift_cell(nx: usize, ny: usize, twist: usize, cell: usize, dx: i64, dy: i64) -> usize {
    let (cx, cy) = ((cell % nx) as i64, (cell / nx) as i64);
    let y = cy + dy;
    let k = y.div_euclid(ny as i64);
    wrap(y - k * ny as i64, ny) * nx + wrap(cx + dx - k * twist as i64, nx)
}

impl HoneycombLattice {
    /// Builds the `nx x ny` torus.
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        Self::twisted(nx, ny, 0)
    }

    /// Torus spanned by `(nx, 0)` and `(twist, ny)` in cell units.
    pub fn twisted(nx: usize, ny: usize, twist: usize) -> Result<Self> {
        if nx < 2 || ny < 2 && !(ny == 1 && twist % nx != 0 && twist % nx != nx - 1) {
            return Err(Error::LatticeTooSmall { nx, ny });
        }
        let cells = nx * ny;
        let mut sites = Vec::with_capacity(2 * cells);
        for cy in 0..ny {
            for cx in 0..nx {
                sites.push(Site { cell: (cx, cy), sublattice: Sublattice::A });
                sites.push(Site { cell: (cx, cy), sublattice: Sublattice::B });
            }
        }
        let mut lat = Self { nx, ny, twist: twist % nx, sites, links: Vec::with_capacity(3 * cells), plaquettes: Vec::new() };
        for kind in [LinkType::Z, LinkType::X, LinkType::Y] {
            for cell in 0..cells {
                let (dx, dy) = match kind {
                    LinkType::Z => (0, 0),
                    LinkType::X => (-1, 0),
                    LinkType::Y => (0, -1),
                };
                let a = lat.site_at(cell, 0, 0, Sublattice::A);
                let b = lat.site_at(cell, dx, dy, Sublattice::B);
                lat.links.push(Link { a, b, kind });
            }
        }
        lat.plaquettes = (0..cells)
            .map(|c| {
                [
                    lat.site_at(c, 0, 0, Sublattice::A),
                    lat.site_at(c, 0, 0, Sublattice::B),
                    lat.site_at(c, 1, 0, Sublattice::A),
                    lat.site_at(c, 1, -1, Sublattice::B),
                    lat.site_at(c, 1, -1, Sublattice::A),
                    lat.site_at(c, 0, -1, Sublattice::B),
                ]
            })
            .collect();
        Ok(lat)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn num_cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn plaquettes(&self) -> &[[usize; 6]] {
        &self.plaquettes
    }

    pub fn links_of_type(&self, kind: LinkType) -> impl Iterator<Item = (usize, &Link)> {
        self.links.iter().enumerate().filter(move |(_, l)| l.kind == kind)
    }

    /// Index of the cell displaced from `cell` by `(dx, dy)` with wrap-around.
    pub fn shift_cell(&self, cell: usize, dx: i64, dy: i64) -> usize {
        shift_cell(self.nx, self.ny, self.twist, cell, dx, dy)
    }

    fn site_at(&self, cell: usize, dx: i64, dy: i64, sub: Sublattice) -> usize {
        let c = self.shift_cell(cell, dx, dy);
        2 * c + usize::from(sub == Sublattice::B)
    }

    /// The link joining two sites, if any.
    pub fn link_between(&self, s: usize, t: usize) -> Option<usize> {
        self.links.iter().position(|l| (l.a == s && l.b == t) || (l.a == t && l.b == s))
    }

    /// Type of the one link at `site` not used by the ring neighbours `prev`, `next`.
    pub fn outer_link_type(&self, site: usize, prev: usize, next: usize) -> Option<LinkType> {
        let used: Vec<LinkType> = [prev, next]
            .iter()
            .filter_map(|&o| self.link_between(site, o).map(|i| self.links[i].kind))
            .collect();
        [LinkType::X, LinkType::Y, LinkType::Z].into_iter().find(|k| !used.contains(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(lat: &HoneycombLattice) {
        let n = lat.num_sites();
        let mut per_site = vec![[0usize; 3]; n];
        for l in lat.links() {
            assert_ne!(l.a, l.b);
            let k = l.kind as usize;
            per_site[l.a][k] += 1;
            per_site[l.b][k] += 1;
        }
        assert!(per_site.iter().all(|c| *c == [1, 1, 1]), "typed 3-regularity");
        assert_eq!(lat.links_of_type(LinkType::Z).count(), lat.num_cells());
        assert_eq!(lat.plaquettes().len(), lat.num_cells());
        let mut link_faces = vec![0usize; lat.links().len()];
        for ring in lat.plaquettes() {
            for i in 0..6 {
                let l = lat.link_between(ring[i], ring[(i + 1) % 6]).expect("ring edge is a link");
                link_faces[l] += 1;
            }
        }
        assert!(link_faces.iter().all(|&c| c == 2), "each link borders two faces");
    }

    #[test]
    fn sixteen_site_cluster() {
        let lat = HoneycombLattice::new(2, 4).unwrap();
        assert_eq!(lat.num_sites(), 16);
        assert_eq!(lat.links_of_type(LinkType::Z).count(), 8);
        assert_eq!(lat.plaquettes().len(), 8);
        check_invariants(&lat);
    }

    #[test]
    fn invariants_over_sizes() {
        for nx in 2..6 {
            for ny in 2..6 {
                check_invariants(&HoneycombLattice::new(nx, ny).unwrap());
            }
        }
        let lat = HoneycombLattice::new(3, 3).unwrap();
        assert_eq!(lat.num_sites(), 18);
        let lat = HoneycombLattice::new(2, 2).unwrap();
        assert_eq!((lat.num_sites(), lat.num_cells()), (8, 4));
    }

    #[test]
    fn rejects_degenerate_wrap() {
        assert_eq!(HoneycombLattice::new(1, 4), Err(Error::LatticeTooSmall { nx: 1, ny: 4 }));
        assert!(HoneycombLattice::new(3, 0).is_err());
    }

    #[test]
    fn site_indexing_is_row_major_a_before_b() {
        let lat = HoneycombLattice::new(3, 2).unwrap();
        assert_eq!(lat.sites()[0], Site { cell: (0, 0), sublattice: Sublattice::A });
        assert_eq!(lat.sites()[1], Site { cell: (0, 0), sublattice: Sublattice::B });
        assert_eq!(lat.sites()[2].cell, (1, 0));
        assert_eq!(lat.sites()[6].cell, (0, 1));
    }
}
