mod common;

use cubic_codes::paut::{
    are_equivalent, are_equivalent_with, paut, paut_brute, paut_with, Equivalence, PautOptions, WordSet,
};
use cubic_codes::sigma::SigmaAction;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn refinement_matches_brute_force(seed: u64, n in 1usize..=8, rows in 0usize..=5) {
        let c = common::random_code(&mut common::rng(seed), n, rows);
        let fast = paut(&c).unwrap();
        let slow = paut_brute(&c).unwrap();
        prop_assert_eq!(fast.order(), slow.order());
        for g in slow.generators() {
            prop_assert!(fast.contains(g));
        }
    }

    #[test]
    fn word_sets_agree(seed: u64, n in 3usize..=14, rows in 1usize..=6) {
        let c = common::random_code(&mut common::rng(seed), n, rows);
        let all = paut_with(&c, &PautOptions { words: WordSet::All, timeout: None }).unwrap();
        let auto = paut(&c).unwrap();
        prop_assert!(all.exact);
        prop_assert_eq!(all.order(), auto.order());
        // Smallest cap whose words span the code, and one above it.
        let words = c.codewords().unwrap();
        let spans = |cap: usize| {
            let low: Vec<_> = words.iter().filter(|w| w.weight() <= cap).cloned().collect();
            cubic_codes::LinearCode::from_rows(n, low).unwrap().dim() == c.dim()
        };
        let first = (0..=n).find(|&cap| spans(cap)).unwrap();
        for cap in [first, (first + 1).min(n)] {
            let capped = paut_with(&c, &PautOptions { words: WordSet::WeightCap(cap), timeout: None }).unwrap();
            prop_assert_eq!(capped.order(), auto.order());
        }
    }

    #[test]
    fn generators_are_automorphisms(seed: u64, n in 3usize..=24, rows in 1usize..=6) {
        let c = common::random_code(&mut common::rng(seed), n, rows);
        for g in paut(&c).unwrap().generators() {
            prop_assert_eq!(g.apply_code(&c).unwrap(), c.clone());
        }
    }

    /// `PAut(C^p) = p^-1 PAut(C) p`.
    #[test]
    fn conjugation_covariance(seed: u64, n in 3usize..=20, rows in 1usize..=6) {
        let mut r = common::rng(seed);
        let c = common::random_code(&mut r, n, rows);
        let p = common::random_perm(&mut r, n);
        let cp = p.apply_code(&c).unwrap();
        let g = paut(&c).unwrap();
        let h = paut(&cp).unwrap();
        prop_assert_eq!(g.order(), h.order());
        for x in g.generators() {
            prop_assert!(h.contains(&p.conjugate(x).unwrap()));
        }
    }

    #[test]
    fn sigma_is_an_automorphism(seed: u64, m in 1usize..=8, rows in 1usize..=4) {
        let c = common::random_sigma_code(&mut common::rng(seed), m, rows);
        prop_assert!(paut(&c).unwrap().contains(&SigmaAction::new(m).permutation()));
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(seed: u64, n in 3usize..=16, rows in 1usize..=5) {
        let mut r = common::rng(seed);
        let a = common::random_code(&mut r, n, rows);
        let p = common::random_perm(&mut r, n);
        let q = common::random_perm(&mut r, n);
        let b = p.apply_code(&a).unwrap();
        let c = q.apply_code(&b).unwrap();
        let ab = are_equivalent(&a, &b).unwrap().expect("a ~ b");
        prop_assert_eq!(ab.apply_code(&a).unwrap(), b.clone());
        let ba = are_equivalent(&b, &a).unwrap().expect("b ~ a");
        prop_assert_eq!(ba.apply_code(&b).unwrap(), a.clone());
        let ac = are_equivalent(&a, &c).unwrap().expect("a ~ c");
        prop_assert_eq!(ac.apply_code(&a).unwrap(), c.clone());
        prop_assert!(are_equivalent(&a, &a).unwrap().is_some());

        // With the automorphism group supplied the answer is unchanged.
        let opts = PautOptions::default();
        let aut = paut_with(&a, &opts).unwrap();
        prop_assert!(matches!(are_equivalent_with(&a, &c, Some(&aut), &opts).unwrap(), Equivalence::Equivalent(_)));
    }

    /// Inequivalent by brute force means the search says so too.
    #[test]
    fn inequivalence_matches_brute_force(seed: u64, n in 2usize..=7, rows in 1usize..=4) {
        let mut r = common::rng(seed);
        let a = common::random_code(&mut r, n, rows);
        let b = common::random_code(&mut r, n, rows);
        let brute = cubic_codes::Permutation::identity(n);
        let mut images: Vec<usize> = (0..n).collect();
        let mut found = brute.apply_code(&a).unwrap() == b;
        // Heap's algorithm over all n! permutations.
        let mut cnt = vec![0usize; n];
        let mut i = 0;
        while i < n && !found {
            if cnt[i] < i {
                if i % 2 == 0 { images.swap(0, i) } else { images.swap(cnt[i], i) }
                let p = cubic_codes::Permutation::from_images(images.clone()).unwrap();
                found = p.apply_code(&a).unwrap() == b;
                cnt[i] += 1;
                i = 0;
            } else {
                cnt[i] = 0;
                i += 1;
            }
        }
        prop_assert_eq!(are_equivalent(&a, &b).unwrap().is_some(), found);
    }
}
