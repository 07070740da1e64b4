use std::collections::HashSet;

use honeycomb_anyons::lattice::LinkType;
use honeycomb_anyons::{EffectiveLattice, HoneycombLattice};
use proptest::prelude::*;

proptest! {
    #[test]
    fn honeycomb_sites_have_one_link_of_each_type(nx in 2usize..7, ny in 2usize..7) {
        let lat = HoneycombLattice::new(nx, ny).unwrap();
        prop_assert_eq!(lat.num_sites(), 2 * nx * ny);
        prop_assert_eq!(lat.links().len(), 3 * nx * ny);
        let mut seen = vec![Vec::new(); lat.num_sites()];
        for l in lat.links() {
            prop_assert_ne!(l.a, l.b);
            seen[l.a].push(l.kind);
            seen[l.b].push(l.kind);
        }
        for kinds in seen {
            let set: HashSet<_> = kinds.iter().copied().collect();
            prop_assert_eq!(kinds.len(), 3);
            prop_assert_eq!(set, [LinkType::X, LinkType::Y, LinkType::Z].into_iter().collect::<HashSet<_>>());
        }
    }

    #[test]
    fn honeycomb_plaquettes_are_closed_rings(nx in 2usize..7, ny in 2usize..7) {
        let lat = HoneycombLattice::new(nx, ny).unwrap();
        prop_assert_eq!(lat.plaquettes().len(), nx * ny);
        for ring in lat.plaquettes() {
            let set: HashSet<_> = ring.iter().collect();
            prop_assert_eq!(set.len(), 6);
            for k in 0..6 {
                prop_assert!(lat.link_between(ring[k], ring[(k + 1) % 6]).is_some());
            }
        }
    }

    #[test]
    fn effective_plaquette_operators_commute(nx in 2usize..6, ny in 2usize..6) {
        let eff = EffectiveLattice::new(nx, ny).unwrap();
        let q = eff.plaquette_operators();
        prop_assert_eq!(q.len(), nx * ny);
        for a in &q {
            prop_assert!(a.is_hermitian());
            prop_assert_eq!(a.weight(), 4);
            for b in &q {
                prop_assert!(a.commutes_with(b));
            }
        }
    }

    #[test]
    fn every_spin_borders_four_faces(nx in 2usize..6, ny in 2usize..6) {
        let eff = EffectiveLattice::new(nx, ny).unwrap();
        let q = eff.plaquette_operators();
        for j in 0..eff.n_eff() {
            let f = eff.faces_of(j);
            let members = q.iter().filter(|p| p.support() >> j & 1 == 1).count();
            prop_assert_eq!(members, 4);
            for face in [f.left, f.right, f.above, f.below] {
                prop_assert!(q[face].support() >> j & 1 == 1);
            }
        }
    }

    #[test]
    fn display_coordinates_round_trip(nx in 2usize..6, ny in 2usize..6) {
        let eff = EffectiveLattice::new(nx, ny).unwrap();
        for p in 0..eff.num_plaquettes() {
            let (c, r) = eff.face_display(p);
            prop_assert_eq!(eff.face_at(c, r), Some(p));
            prop_assert_eq!(eff.spin_at(c, r), None);
        }
        for j in 0..eff.n_eff() {
            let (c, r) = eff.spin_display(j);
            prop_assert_eq!(eff.spin_at(c, r), Some(j));
            prop_assert_eq!(eff.face_at(c, r), None);
        }
    }
}
