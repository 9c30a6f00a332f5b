#![allow(dead_code)]

use cubic_codes::cubic::{build_cubic, CubicPair, F4Elem, QuaternaryCode};
use cubic_codes::sigma::SigmaAction;
use cubic_codes::{Codeword, LinearCode, Permutation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x00c0_ffee;

/// Seed from `CUBIC_SEED`, else the fixed default, mixed with `salt`.
pub fn rng(salt: u64) -> ChaCha8Rng {
    let seed = std::env::var("CUBIC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_word(rng: &mut impl Rng, n: usize) -> Codeword {
    Codeword::from_bits(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>())
}

/// Span of `rows` random words; dimension at most `rows`.
pub fn random_code(rng: &mut impl Rng, n: usize, rows: usize) -> LinearCode {
    LinearCode::from_rows(n, (0..rows).map(|_| random_word(rng, n)).collect()).unwrap()
}

/// Random code of exact dimension `k`.
pub fn random_code_of_dim(rng: &mut impl Rng, n: usize, k: usize) -> LinearCode {
    loop {
        let c = random_code(rng, n, k);
        if c.dim() == k {
            return c;
        }
    }
}

pub fn random_quaternary(rng: &mut impl Rng, m: usize, k: usize) -> QuaternaryCode {
    loop {
        let rows = (0..k)
            .map(|_| (0..m).map(|_| F4Elem::from_code(rng.gen_range(0..4)).unwrap()).collect())
            .collect();
        let q = QuaternaryCode::from_rows(m, rows).unwrap();
        if q.dim() == k {
            return q;
        }
    }
}

/// Random pair with `dim B = kb`, `dim Q = kq`, and its cubic code.
pub fn random_cubic(rng: &mut impl Rng, m: usize, kb: usize, kq: usize) -> (CubicPair, LinearCode) {
    let p = CubicPair::new(random_code_of_dim(rng, m, kb), random_quaternary(rng, m, kq)).unwrap();
    let c = build_cubic(&p).unwrap();
    (p, c)
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Permutation::from_images(img).unwrap()
}

/// Span of `rows` random words of length `3m` together with both sigma images.
pub fn random_sigma_code(rng: &mut impl Rng, m: usize, rows: usize) -> LinearCode {
    let action = SigmaAction::new(m);
    let words = (0..rows)
        .flat_map(|_| {
            let w = random_word(rng, 3 * m);
            let s = action.apply(&w, 1).unwrap();
            let ss = action.apply(&w, 2).unwrap();
            [w, s, ss]
        })
        .collect();
    LinearCode::from_rows(3 * m, words).unwrap()
}
