use honeycomb_anyons::lattice::{face_loop, single_rotation, string_between};
use honeycomb_anyons::spectra::assemble_effective;
use honeycomb_anyons::toric::{
    braid_phase, braided_faces, create_pair, fuse, ground_state, AnyonConfiguration, FusionTable, LoopFaces, State,
};
use honeycomb_anyons::{AnyonType, EffectiveLattice, Endpoint, PauliString};
use proptest::prelude::*;

const KINDS: [AnyonType; 3] = [AnyonType::X, AnyonType::Y, AnyonType::Z];

fn kind() -> impl Strategy<Value = AnyonType> {
    (0usize..3).prop_map(|k| KINDS[k])
}

fn anyon() -> impl Strategy<Value = AnyonType> {
    (0usize..4).prop_map(|k| AnyonType::ALL[k])
}

proptest! {
    #[test]
    fn fusion_is_an_abelian_group(a in anyon(), b in anyon(), c in anyon()) {
        prop_assert_eq!(fuse(fuse(a, b), c), fuse(a, fuse(b, c)));
        prop_assert_eq!(fuse(a, b), fuse(b, a));
        prop_assert_eq!(fuse(a, AnyonType::Vacuum), a);
        prop_assert_eq!(fuse(a, a), AnyonType::Vacuum);
    }

    #[test]
    fn fusion_table_follows_from_spin_operators(spin in 0usize..16) {
        let eff = EffectiveLattice::new(4, 4).unwrap();
        prop_assert_eq!(FusionTable::from_operators(&eff, spin).unwrap(), FusionTable::standard());
    }

    #[test]
    fn excitations_come_in_pairs_per_class(moves in proptest::collection::vec((0usize..64, kind()), 0..30)) {
        let eff = EffectiveLattice::new(8, 8).unwrap();
        let mut op = PauliString::identity(eff.n_eff()).unwrap();
        for (spin, k) in moves {
            op = op.multiply(&single_rotation(&eff, spin, k).unwrap().operator(&eff)).unwrap();
        }
        let excited = eff.excited_by(&op);
        for class in 0..2 {
            let n = excited.iter().filter(|&&p| eff.face_class(p) == Some(class)).count();
            prop_assert_eq!(n % 2, 0);
        }
    }

    #[test]
    fn closed_loops_create_nothing(face in 0usize..64, w in 1i64..4, h in 1i64..4, k in 1usize..3) {
        let eff = EffectiveLattice::new(8, 8).unwrap();
        let kind = KINDS[k];
        let path = face_loop(&eff, face, w, h, kind).unwrap();
        prop_assert!(path.is_closed());
        prop_assert!(eff.excited_by(&path.operator(&eff)).is_empty());
    }

    #[test]
    fn braiding_matches_enclosure(
        a in 0usize..64,
        dist in 1i64..4,
        corner in 0usize..64,
        w in 1i64..5,
        h in 1i64..5,
        vertical in any::<bool>(),
    ) {
        let eff = EffectiveLattice::new(8, 8).unwrap();
        let (c, r) = eff.face_display(a);
        let (kind, b) = if vertical {
            (AnyonType::Y, eff.face_at(c, r + 2 * dist).unwrap())
        } else {
            (AnyonType::Z, eff.face_at(c + 2 * dist, r).unwrap())
        };
        let pair = string_between(&eff, Endpoint::Face(a), Endpoint::Face(b), kind).unwrap();
        let target = AnyonConfiguration::vacuum(&eff).with_string(&pair).unwrap();
        let (cc, cr) = eff.face_display(corner);
        let geometry = LoopFaces { corners: vec![corner, eff.face_at(cc + 1, cr + 1).unwrap()], w, h };
        let braided = braided_faces(&eff, &geometry, &target.excited());
        prop_assume!(braided.is_ok());
        let expected = if braided.unwrap().len() % 2 == 0 { 1 } else { -1 };
        let path = geometry.path(&eff, AnyonType::X).unwrap();
        prop_assert_eq!(braid_phase(&eff, &path, &target).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pair_energy_is_independent_of_string_length(a in 0usize..16, dist in 1i64..4, vertical in any::<bool>()) {
        let eff = EffectiveLattice::new(4, 4).unwrap();
        let h = assemble_effective(&eff, &vec![1.0; eff.num_plaquettes()]).unwrap();
        let g: State<f64> = ground_state(&eff).unwrap();
        let (c, r) = eff.face_display(a);
        let (kind, b) = if vertical {
            (AnyonType::Y, eff.face_at(c, r + 2 * dist).unwrap())
        } else {
            (AnyonType::Z, eff.face_at(c + 2 * dist, r).unwrap())
        };
        prop_assume!(a != b);
        let path = string_between(&eff, Endpoint::Face(a), Endpoint::Face(b), kind).unwrap();
        let (psi, config) = create_pair(&eff, &g, &path).unwrap();
        prop_assert!(config.matches(&eff, &psi).unwrap());
        let e0 = g.energy(&h).unwrap();
        prop_assert!((e0 + 16.0).abs() < 1e-10);
        prop_assert!((psi.energy(&h).unwrap() - e0 - 4.0).abs() < 1e-10);
    }
}
