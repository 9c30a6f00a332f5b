mod common;

use cubic_codes::sigma::{
    block_profile, block_sum_check, huffman_decompose, is_sigma_invariant, orbit_weight_classify,
    sigma_pair_basis, OrbitWeightClass, SigmaAction,
};
use cubic_codes::LinearCode;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_has_order_three(seed: u64, m in 1usize..20) {
        let mut r = common::rng(seed);
        let a = SigmaAction::new(m);
        let v = common::random_word(&mut r, 3 * m);
        prop_assert_eq!(a.apply(&v, 3).unwrap(), v.clone());
        prop_assert_eq!(a.apply(&a.apply(&v, 1).unwrap(), 2).unwrap(), v.clone());
        prop_assert_eq!(a.permutation().apply_word(&v).unwrap(), a.apply(&v, 1).unwrap());
        prop_assert_eq!(a.permutation().order(), 3);
    }

    #[test]
    fn decomposition_splits_the_code(seed: u64, m in 1usize..12, rows in 0usize..5) {
        let c = common::random_sigma_code(&mut common::rng(seed), m, rows);
        prop_assert!(is_sigma_invariant(&c).unwrap());
        let a = SigmaAction::new(m);
        let d = huffman_decompose(&c).unwrap();
        prop_assert_eq!(d.fixed.dim() + d.even.dim(), c.dim());
        prop_assert_eq!(d.fixed.sum(&d.even).unwrap(), c.clone());
        prop_assert_eq!(d.even.dim() % 2, 0);
        for w in d.fixed.generator().rows() {
            prop_assert_eq!(&a.apply(w, 1).unwrap(), w);
        }
        for w in d.even.generator().rows() {
            prop_assert!(block_sum_check(w, a).unwrap());
            prop_assert!(a.check_even_blocks(w).is_ok());
        }
    }

    #[test]
    fn pair_basis_spans_even_part(seed: u64, m in 1usize..12, rows in 0usize..5) {
        let c = common::random_sigma_code(&mut common::rng(seed), m, rows);
        let e = huffman_decompose(&c).unwrap().even;
        let basis = sigma_pair_basis(&e).unwrap();
        let k = basis.len() / 2;
        prop_assert_eq!(basis.len(), e.dim());
        prop_assert_eq!(LinearCode::from_rows(3 * m, basis.clone()).unwrap(), e);
        let a = SigmaAction::new(m);
        for i in 0..k {
            prop_assert_eq!(&a.apply(&basis[i], 1).unwrap(), &basis[k + i]);
        }
    }

    #[test]
    fn block_profile_identities(seed: u64, m in 1usize..16, rows in 1usize..5) {
        let mut r = common::rng(seed);
        let c = common::random_sigma_code(&mut r, m, rows);
        let e = huffman_decompose(&c).unwrap().even;
        let words = e.codewords().unwrap();
        let a = SigmaAction::new(m);
        for _ in 0..5 {
            let v = &words[r.gen_range(0..words.len())];
            let w = &words[r.gen_range(0..words.len())];
            let p = block_profile(v, w, a).unwrap();
            prop_assert!(p.identities_hold(), "{:?}", p.identities());
            prop_assert_eq!(p.l.iter().sum::<usize>() + p.s + p.t + p.r, m);
        }
    }

    #[test]
    fn orbits_partition_codewords(seed: u64, m in 1usize..8, rows in 0usize..4) {
        let c = common::random_sigma_code(&mut common::rng(seed), m, rows);
        let o = orbit_weight_classify(&c).unwrap();
        prop_assert_eq!(o.orbits.iter().map(|x| x.size as u64).sum::<u64>(), 1u64 << c.dim());
        prop_assert!(o.orbits.iter().all(|x| x.size == 1 || x.size == 3));
        let mut ws: Vec<usize> = o.orbits.iter().map(|x| x.weight).collect();
        let before = ws.len();
        ws.sort_unstable();
        ws.dedup();
        prop_assert_eq!(o.class == OrbitWeightClass::Distinct, ws.len() == before);
    }
}

#[test]
fn length_must_be_a_multiple_of_three() {
    assert!(SigmaAction::for_length(7).is_err());
    assert!(is_sigma_invariant(&LinearCode::zero(4)).is_err());
}
