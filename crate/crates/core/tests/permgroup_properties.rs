mod common;

use std::collections::HashSet;

use cubic_codes::permgroup::StructureLabel;
use cubic_codes::{PermGroup, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

/// Closure of the generators by breadth-first multiplication.
fn brute_elements(n: usize, gens: &[Permutation], cap: usize) -> Option<HashSet<Permutation>> {
    let mut seen = HashSet::from([Permutation::identity(n)]);
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g).unwrap();
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(seen)
}

/// Random generators with small support so that many groups stay small.
fn random_gens(rng: &mut impl Rng, n: usize) -> Vec<Permutation> {
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let support = rng.gen_range(2..=n.min(6));
            let mut pts: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut pts[..], rng);
            let mut img: Vec<usize> = (0..n).collect();
            let chosen = &pts[..support];
            let mut rotated = chosen.to_vec();
            rand::seq::SliceRandom::shuffle(&mut rotated[..], rng);
            for (a, b) in chosen.iter().zip(&rotated) {
                img[*a] = *b;
            }
            Permutation::from_images(img).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn order_matches_enumeration(seed: u64, n in 2usize..=12) {
        let mut r = common::rng(seed);
        let gens = random_gens(&mut r, n);
        let g = PermGroup::from_generators(n, gens.clone()).unwrap();
        if let Some(all) = brute_elements(n, &gens, 5000) {
            prop_assert_eq!(g.order(), BigUint::from(all.len()));
            for x in &all {
                prop_assert!(g.contains(x));
            }
            // Non-members drawn at random and confirmed by the enumeration.
            for _ in 0..50 {
                let p = common::random_perm(&mut r, n);
                prop_assert_eq!(g.contains(&p), all.contains(&p));
            }
        }
    }

    #[test]
    fn random_words_are_members(seed: u64, n in 2usize..=12) {
        let mut r = common::rng(seed);
        let gens = random_gens(&mut r, n);
        let g = PermGroup::from_generators(n, gens.clone()).unwrap();
        prop_assert!(g.contains(&Permutation::identity(n)));
        for _ in 0..20 {
            let mut w = Permutation::identity(n);
            for _ in 0..r.gen_range(1..12) {
                let s = &gens[r.gen_range(0..gens.len())];
                let s = if r.gen() { s.inverse() } else { s.clone() };
                w = w.compose(&s).unwrap();
            }
            prop_assert!(g.contains(&w));
        }
    }

    #[test]
    fn fingerprint_is_conjugation_invariant(seed: u64, n in 3usize..=9) {
        let mut r = common::rng(seed);
        let gens = random_gens(&mut r, n);
        let g = PermGroup::from_generators(n, gens.clone()).unwrap();
        let d = common::random_perm(&mut r, n);
        let h = PermGroup::from_generators(n, gens.iter().map(|x| d.conjugate(x).unwrap())).unwrap();
        prop_assert_eq!(g.order(), h.order());
        if g.order() <= BigUint::from(2000u32) {
            prop_assert_eq!(g.fingerprint(), h.fingerprint());
        }
    }

    #[test]
    fn group_axioms(seed: u64, n in 1usize..=20) {
        let mut r = common::rng(seed);
        let (a, b, c) = (common::random_perm(&mut r, n), common::random_perm(&mut r, n), common::random_perm(&mut r, n));
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.power(a.order() as i64), Permutation::identity(n));
        prop_assert_eq!(Permutation::parse(n, &a.to_string()).unwrap(), a.clone());
        // Right action: x^(ab) = (x^a)^b.
        for x in 0..n {
            prop_assert_eq!(a.compose(&b).unwrap().apply(x), b.apply(a.apply(x)));
        }
    }
}

#[test]
fn named_structures() {
    let p = |n: usize, s: &str| Permutation::parse(n, s).unwrap();
    let g = PermGroup::from_generators(9, [p(9, "(1,2,3)(4,5,6)(7,8,9)"), p(9, "(1,9)"), p(9, "(2,7)"), p(9, "(3,8)"), p(9, "(1,3)(4,5)(8,9)")]).unwrap();
    assert_eq!(g.order_u64(), Some(48));
    let c3 = PermGroup::from_generators(6, [p(6, "(1,2,3)(4,5,6)")]).unwrap();
    assert_eq!(c3.fingerprint(), StructureLabel::C3);
    let s3xs3 = PermGroup::from_generators(6, [p(6, "(1,2,3)"), p(6, "(1,2)"), p(6, "(4,5,6)"), p(6, "(4,5)")]).unwrap();
    assert_eq!(s3xs3.fingerprint(), StructureLabel::S3xS3);
    assert_eq!(PermGroup::from_generators(3, []).unwrap().order_u64(), Some(1));
}
