use honeycomb_anyons::{Complex64, PauliString};
use proptest::prelude::*;

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    let m = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, k)| PauliString::from_masks(n, x & m, z & m, k).unwrap())
}

fn triple(max_n: usize) -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
    (1..=max_n).prop_flat_map(|n| (string(n), string(n), string(n)))
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in triple(40)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutation_phase_relates_both_orders((a, b, _) in triple(40)) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let s = a.commutation_phase(&b).unwrap();
        prop_assert_eq!(ab.x_mask(), ba.x_mask());
        prop_assert_eq!(ab.z_mask(), ba.z_mask());
        let shift = if s == 1 { 0 } else { 2 };
        prop_assert_eq!(ab.phase_exp(), (ba.phase_exp() + shift) % 4);
        prop_assert_eq!(a.commutes_with(&b), s == 1);
        prop_assert_eq!(s, b.commutation_phase(&a).unwrap());
    }

    #[test]
    fn apply_is_a_homomorphism((a, b, _) in triple(30), basis in any::<u64>()) {
        let basis = basis & ((1u64 << a.n()) - 1);
        let (mid, amp_b) = b.apply::<f64>(basis);
        let (end, amp_a) = a.apply::<f64>(mid);
        let (direct, amp) = a.multiply(&b).unwrap().apply::<f64>(basis);
        prop_assert_eq!(direct, end);
        prop_assert!((amp - amp_a * amp_b).norm() < 1e-15);
    }

    #[test]
    fn adjoint_inverts((a, _, _) in triple(40)) {
        let id = a.multiply(&a.adjoint()).unwrap();
        prop_assert!(id.is_scalar());
        prop_assert_eq!(id.phase_exp(), 0);
        prop_assert_eq!(a.is_hermitian(), a.adjoint() == a);
        if a.is_hermitian() {
            prop_assert_eq!(a.multiply(&a).unwrap(), PauliString::identity(a.n()).unwrap());
        }
    }

    #[test]
    fn product_matches_dense((a, b, _) in triple(4)) {
        let dense = matmul(&a.to_dense::<f64>(), &b.to_dense::<f64>());
        prop_assert_eq!(a.multiply(&b).unwrap().to_dense::<f64>(), dense);
    }

    #[test]
    fn mismatched_lengths_are_rejected(a in string(3), b in string(5)) {
        prop_assert!(a.multiply(&b).is_err());
        prop_assert!(a.commutation_phase(&b).is_err());
    }
}
