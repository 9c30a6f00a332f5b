mod common;

use cubic_codes::involutions::{construct_involution, verify_automorphism, InvolutionResult};
use cubic_codes::paut::paut;
use cubic_codes::sigma::huffman_decompose;
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Every produced involution is an automorphism; a refusal is never an error.
    #[test]
    fn constructed_involutions_are_automorphisms(seed: u64, m in 2usize..12, kb in 0usize..3, kq in 1usize..3) {
        prop_assume!(kb <= m && kq <= m);
        let (_, c) = common::random_cubic(&mut common::rng(seed), m, kb, kq);
        let out = construct_involution(&c).unwrap();
        if let InvolutionResult::Found { permutation, .. } = &out.result {
            prop_assert!(permutation.is_involution());
            prop_assert!(!permutation.is_identity());
            prop_assert!(verify_automorphism(&c, permutation).unwrap());
        }
    }

    /// A found involution forces an even automorphism group order.
    #[test]
    fn involution_implies_even_order(seed: u64, m in 2usize..7, kq in 1usize..3) {
        prop_assume!(kq <= m);
        let (_, c) = common::random_cubic(&mut common::rng(seed), m, 0, kq);
        let out = construct_involution(&c).unwrap();
        if out.permutation().is_some() {
            let order = paut(&c).unwrap().order();
            prop_assert_eq!(order % BigUint::from(2u32), BigUint::from(0u32));
        }
    }

    /// `dim E = 2` always yields an involution.
    #[test]
    fn single_orbit_always_applies(seed: u64, m in 1usize..16, kb in 0usize..4) {
        prop_assume!(kb <= m);
        let (_, c) = common::random_cubic(&mut common::rng(seed), m, kb, 1);
        prop_assert_eq!(huffman_decompose(&c).unwrap().even.dim(), 2);
        let out = construct_involution(&c).unwrap();
        let p = out.permutation().cloned();
        prop_assert!(p.is_some(), "{:?}", out.reason());
        prop_assert!(verify_automorphism(&c, &p.unwrap()).unwrap());
    }
}
