//! The fixed-point-free order-3 permutation `(1,2,3)(4,5,6)...(n-2,n-1,n)`,
//! its action on words and codes, the fixed/even-block decomposition and the
//! per-pair block statistics used by the involution constructions.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, LinearCode};
use crate::permgroup::Permutation;

/// The canonical product of `m` consecutive 3-cycles on `n = 3m` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SigmaAction {
    m: usize,
}

impl SigmaAction {
    pub fn new(m: usize) -> Self {
        Self { m }
    }

    pub fn for_length(n: usize) -> Result<Self> {
        if !n.is_multiple_of(3) {
            return Err(Error::LengthNotMultipleOfThree(n));
        }
        Ok(Self { m: n / 3 })
    }

    pub fn blocks(&self) -> usize {
        self.m
    }

    pub fn length(&self) -> usize {
        3 * self.m
    }

    /// 0-based coordinates of block `i` (0-based).
    pub fn block(&self, i: usize) -> [usize; 3] {
        [3 * i, 3 * i + 1, 3 * i + 2]
    }

    pub fn permutation(&self) -> Permutation {
        let img = (0..self.length())
            .map(|x| (x - x % 3 + (x + 1) % 3) as u32)
            .collect();
        Permutation::from_images_unchecked(img)
    }

    fn check(&self, v: &Codeword) -> Result<()> {
        if v.len() != self.length() {
            return Err(Error::LengthMismatch {
                expected: self.length(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `v^(sigma^power)`, with `(v^sigma)_j = v_{sigma^-1(j)}`.
    pub fn apply(&self, v: &Codeword, power: u8) -> Result<Codeword> {
        self.check(v)?;
        Ok(self.apply_unchecked(v, power))
    }

    pub(crate) fn apply_unchecked(&self, v: &Codeword, power: u8) -> Codeword {
        let shift = (power % 3) as usize;
        if shift == 0 {
            return v.clone();
        }
        let mut out = Codeword::zeros(v.len());
        for i in v.support() {
            let base = i - i % 3;
            out.set(base + (i % 3 + shift) % 3, true);
        }
        out
    }

    /// Block `i` as a 3-bit value, first coordinate most significant.
    pub fn block_bits(&self, v: &Codeword, i: usize) -> u8 {
        v.chunk(3 * i, 3)
    }

    /// Checks that every block has even weight; reports the first odd block.
    pub fn check_even_blocks(&self, v: &Codeword) -> Result<()> {
        self.check(v)?;
        match (0..self.m).find(|&i| self.block_bits(v, i).count_ones() % 2 == 1) {
            Some(i) => Err(Error::OddBlock { block: i + 1 }),
            None => Ok(()),
        }
    }
}

pub fn is_sigma_invariant(c: &LinearCode) -> Result<bool> {
    let action = SigmaAction::for_length(c.len())?;
    Ok(c
        .generator()
        .rows()
        .iter()
        .all(|r| c.contains(&action.apply_unchecked(r, 1))))
}

/// `v + v^sigma + v^(sigma^2) = 0`.
pub fn block_sum_check(v: &Codeword, action: SigmaAction) -> Result<bool> {
    let a = action.apply(v, 1)?;
    let b = action.apply_unchecked(v, 2);
    Ok(v.xor(&a).xor(&b).is_zero())
}

/// Fixed subcode `F` and even-block subcode `E` with `C = F (+) E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub fixed: LinearCode,
    pub even: LinearCode,
}

/// Splits a sigma-invariant code into its fixed and even-block parts, using
/// the projections `v -> v + v^s + v^(s^2)` and `v -> v^s + v^(s^2)`.
pub fn huffman_decompose(c: &LinearCode) -> Result<Decomposition> {
    let action = SigmaAction::for_length(c.len())?;
    if !is_sigma_invariant(c)? {
        return Err(Error::NotSigmaInvariant);
    }
    let mut fixed = Vec::new();
    let mut even = Vec::new();
    for r in c.generator().rows() {
        let s1 = action.apply_unchecked(r, 1);
        let s2 = action.apply_unchecked(r, 2);
        let e = s1.xor(&s2);
        fixed.push(e.xor(r));
        even.push(e);
    }
    let fixed = LinearCode::from_rows(c.len(), fixed)?;
    let even = LinearCode::from_rows(c.len(), even)?;
    debug_assert_eq!(fixed.dim() + even.dim(), c.dim());
    Ok(Decomposition { fixed, even })
}

fn check_even_code(e: &LinearCode, action: SigmaAction) -> Result<()> {
    for r in e.generator().rows() {
        action.check_even_blocks(r)?;
    }
    Ok(())
}

/// Basis `[v1..vr, v1^s..vr^s]` of a sigma-invariant even-block code, chosen
/// greedily: each `v(i+1)` is the first codeword (in enumeration order)
/// outside the span of the words picked so far and their images.
pub fn sigma_pair_basis(e: &LinearCode) -> Result<Vec<Codeword>> {
    let action = SigmaAction::for_length(e.len())?;
    check_even_code(e, action)?;
    if e.dim() % 2 == 1 {
        return Err(Error::OddDimension(e.dim()));
    }
    if !is_sigma_invariant(e)? {
        return Err(Error::NotSigmaInvariant);
    }
    let mut firsts: Vec<Codeword> = Vec::new();
    let mut current = LinearCode::zero(e.len());
    for w in e.span_enumerate()? {
        if current.dim() == e.dim() {
            break;
        }
        if current.contains(&w) {
            continue;
        }
        let ws = action.apply_unchecked(&w, 1);
        current = current.sum(&LinearCode::from_rows(e.len(), vec![w.clone(), ws])?)?;
        firsts.push(w);
    }
    let images: Vec<Codeword> = firsts
        .iter()
        .map(|v| action.apply_unchecked(v, 1))
        .collect();
    firsts.extend(images);
    Ok(firsts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitWeightClass {
    Distinct,
    NonDistinct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    /// Lexicographically smallest member.
    pub representative: Codeword,
    pub size: usize,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClassification {
    pub class: OrbitWeightClass,
    /// Sorted by representative.
    pub orbits: Vec<OrbitEntry>,
}

/// Partitions the codewords into `<sigma>`-orbits; the code is distinct iff
/// no two orbits share a weight.
pub fn orbit_weight_classify(c: &LinearCode) -> Result<OrbitClassification> {
    let action = SigmaAction::for_length(c.len())?;
    if !is_sigma_invariant(c)? {
        return Err(Error::NotSigmaInvariant);
    }
    let mut seen: HashSet<Codeword> = HashSet::new();
    let mut orbits = Vec::new();
    c.for_each_codeword(|w| {
        if seen.contains(w) {
            return;
        }
        let members: BTreeSet<Codeword> =
            (0..3).map(|p| action.apply_unchecked(w, p)).collect();
        let representative = members.iter().next().cloned().expect("nonempty orbit");
        orbits.push(OrbitEntry {
            representative,
            size: members.len(),
            weight: w.weight(),
        });
        seen.extend(members);
    })?;
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    let mut weights = HashSet::new();
    let distinct = orbits.iter().all(|o| weights.insert(o.weight));
    Ok(OrbitClassification {
        class: if distinct {
            OrbitWeightClass::Distinct
        } else {
            OrbitWeightClass::NonDistinct
        },
        orbits,
    })
}

/// Positions inside one nonzero block: first one, second one, zero (0-based coordinates).
pub type BlockPositions = [usize; 3];

/// Block statistics of a pair `(v, w)` of even-block words. Block indices
/// are 0-based here and rendered 1-based by callers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    pub m: usize,
    pub j_v: BTreeSet<usize>,
    pub j_w: BTreeSet<usize>,
    /// `l[i]` counts shared nonzero blocks where `v^(sigma^i)` equals `w`.
    pub l: [usize; 3],
    /// Blocks nonzero in `w` only.
    pub s: usize,
    /// Blocks nonzero in `v` only.
    pub t: usize,
    /// Common zero blocks.
    pub r: usize,
    /// `|J_v \ J_w|` when it equals `|J_w \ J_v|`.
    pub d: Option<usize>,
    /// `J_v \ J_w` ascending: blocks where `w` vanishes but `v` does not.
    pub r_w: Vec<usize>,
    /// `J_w \ J_v` ascending.
    pub r_v: Vec<usize>,
    /// Per nonzero block of `v`: positions of its two ones and its zero.
    pub a_v: BTreeMap<usize, BlockPositions>,
    pub a_w: BTreeMap<usize, BlockPositions>,
    pub weights: ProfileWeights,
}

/// Weights of the words entering the six length/weight identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileWeights {
    pub n: usize,
    pub v: usize,
    pub w: usize,
    pub v_plus_w: usize,
    pub vs_plus_w: usize,
    pub vss_plus_w: usize,
}

fn positions(bits: u8, block: usize) -> Option<BlockPositions> {
    if bits == 0 {
        return None;
    }
    let ones: Vec<usize> = (0..3).filter(|j| bits & (4 >> j) != 0).collect();
    let zero = (0..3).find(|j| bits & (4 >> j) == 0)?;
    Some([3 * block + ones[0], 3 * block + ones[1], 3 * block + zero])
}

impl BlockProfile {
    /// The six identities, in order: length, wt(v), wt(w), wt(v+w),
    /// wt(v^s+w), wt(v^(s^2)+w).
    pub fn identities(&self) -> [bool; 6] {
        let [l0, l1, l2] = self.l;
        let (s, t, r) = (self.s, self.t, self.r);
        let wt = &self.weights;
        [
            wt.n == 3 * (l0 + l1 + l2 + s + r + t),
            wt.v == 2 * (l0 + l1 + l2) + 2 * t,
            wt.w == 2 * (l0 + l1 + l2) + 2 * s,
            wt.v_plus_w == 2 * (l1 + l2 + t + s),
            wt.vs_plus_w == 2 * (l0 + l2 + t + s),
            wt.vss_plus_w == 2 * (l0 + l1 + t + s),
        ]
    }

    pub fn identities_hold(&self) -> bool {
        self.identities().iter().all(|&b| b)
    }

    /// Common zero blocks, ascending.
    pub fn common_zero_blocks(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|b| !self.j_v.contains(b) && !self.j_w.contains(b))
            .collect()
    }

    /// Shared nonzero blocks where `v^(sigma^i)` equals `w`, ascending.
    pub fn matched_blocks(&self, i: usize, v: &Codeword, w: &Codeword) -> Vec<usize> {
        let action = SigmaAction::new(self.m);
        let vs = action.apply_unchecked(v, i as u8);
        self.j_v
            .intersection(&self.j_w)
            .copied()
            .filter(|&b| action.block_bits(&vs, b) == action.block_bits(w, b))
            .collect()
    }
}

pub fn block_profile(v: &Codeword, w: &Codeword, action: SigmaAction) -> Result<BlockProfile> {
    action.check_even_blocks(v)?;
    action.check_even_blocks(w)?;
    let m = action.blocks();
    let vs = action.apply_unchecked(v, 1);
    let vss = action.apply_unchecked(v, 2);
    let mut j_v = BTreeSet::new();
    let mut j_w = BTreeSet::new();
    let mut a_v = BTreeMap::new();
    let mut a_w = BTreeMap::new();
    let mut l = [0usize; 3];
    for b in 0..m {
        let (bv, bw) = (action.block_bits(v, b), action.block_bits(w, b));
        if let Some(p) = positions(bv, b) {
            j_v.insert(b);
            a_v.insert(b, p);
        }
        if let Some(p) = positions(bw, b) {
            j_w.insert(b);
            a_w.insert(b, p);
        }
        if bv != 0 && bw != 0 {
            for (i, x) in [v, &vs, &vss].into_iter().enumerate() {
                if action.block_bits(x, b) == bw {
                    l[i] += 1;
                }
            }
        }
    }
    let r_w: Vec<usize> = j_v.difference(&j_w).copied().collect();
    let r_v: Vec<usize> = j_w.difference(&j_v).copied().collect();
    let r = (0..m).filter(|b| !j_v.contains(b) && !j_w.contains(b)).count();
    let weights = ProfileWeights {
        n: action.length(),
        v: v.weight(),
        w: w.weight(),
        v_plus_w: v.xor(w).weight(),
        vs_plus_w: vs.xor(w).weight(),
        vss_plus_w: vss.xor(w).weight(),
    };
    Ok(BlockProfile {
        m,
        l,
        s: r_v.len(),
        t: r_w.len(),
        r,
        d: (r_v.len() == r_w.len()).then_some(r_w.len()),
        j_v,
        j_w,
        r_w,
        r_v,
        a_v,
        a_w,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(s: &str) -> Codeword {
        Codeword::parse(s).unwrap()
    }

    const V: &str = "110 000 101 011 000 000";
    const W: &str = "000 101 110 000 000 101";

    fn example_code() -> LinearCode {
        LinearCode::from_strs(&[
            V,
            W,
            "011 000 110 101 000 000",
            "000 110 011 000 000 110",
        ])
    }

    #[test]
    fn sigma_images_of_worked_vectors() {
        let a = SigmaAction::new(6);
        assert_eq!(a.apply(&cw(V), 1).unwrap(), cw("011 000 110 101 000 000"));
        assert_eq!(a.apply(&cw(W), 1).unwrap(), cw("000 110 011 000 000 110"));
        assert!(a.apply(&Codeword::zeros(18), 1).unwrap().is_zero());
        assert_eq!(a.apply(&cw(V), 3).unwrap(), cw(V));
        assert!(a.apply(&Codeword::zeros(17), 1).is_err());
    }

    #[test]
    fn permutation_matches_word_action() {
        let a = SigmaAction::new(4);
        let p = a.permutation();
        assert_eq!(p.to_string(), "(1,2,3)(4,5,6)(7,8,9)(10,11,12)");
        let v = cw("110 100 000 011");
        assert_eq!(p.apply_word(&v).unwrap(), a.apply(&v, 1).unwrap());
    }

    #[test]
    fn invariance() {
        assert!(is_sigma_invariant(&example_code()).unwrap());
        assert!(!is_sigma_invariant(&LinearCode::from_strs(&["100000"])).unwrap());
        assert!(is_sigma_invariant(&LinearCode::from_strs(&["111111"])).unwrap());
        assert!(is_sigma_invariant(&LinearCode::from_strs(&["1111"])).is_err());
    }

    #[test]
    fn decomposition_of_worked_example() {
        let c = example_code();
        let d = huffman_decompose(&c).unwrap();
        assert_eq!(d.fixed.dim(), 0);
        assert_eq!(d.even, c);
        let f = LinearCode::from_strs(&["111000"]);
        let d = huffman_decompose(&f).unwrap();
        assert_eq!(d.fixed, f);
        assert_eq!(d.even.dim(), 0);
        assert_eq!(
            huffman_decompose(&LinearCode::from_strs(&["100000"])),
            Err(Error::NotSigmaInvariant)
        );
    }

    #[test]
    fn pair_basis_small_cases() {
        let e = LinearCode::from_strs(&["110110", "011011"]);
        let b = sigma_pair_basis(&e).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(SigmaAction::new(2).apply(&b[0], 1).unwrap(), b[1]);
        assert!(sigma_pair_basis(&LinearCode::zero(6)).unwrap().is_empty());
        let c = example_code();
        let b = sigma_pair_basis(&c).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(LinearCode::from_rows(18, b).unwrap(), c);
    }

    #[test]
    fn pair_basis_rejects_odd_blocks() {
        let c = LinearCode::from_strs(&["111000"]);
        assert_eq!(sigma_pair_basis(&c), Err(Error::OddBlock { block: 1 }));
    }

    #[test]
    fn block_sums() {
        let a = SigmaAction::new(6);
        assert!(block_sum_check(&cw(V), a).unwrap());
        assert!(!block_sum_check(&cw("111000"), SigmaAction::new(2)).unwrap());
        assert!(block_sum_check(&Codeword::zeros(6), SigmaAction::new(2)).unwrap());
    }

    #[test]
    fn orbit_classes() {
        let c = LinearCode::from_strs(&["111000", "101101", "110110"]);
        assert_eq!(orbit_weight_classify(&c).unwrap().class, OrbitWeightClass::NonDistinct);
        let z = orbit_weight_classify(&LinearCode::zero(6)).unwrap();
        assert_eq!(z.class, OrbitWeightClass::Distinct);
        assert_eq!(z.orbits.len(), 1);
    }

    #[test]
    fn profile_of_worked_pair() {
        let p = block_profile(&cw(V), &cw(W), SigmaAction::new(6)).unwrap();
        assert_eq!(p.r_w, vec![0, 3]);
        assert_eq!(p.r_v, vec![1, 5]);
        assert_eq!(p.a_v[&0][0], 0);
        assert_eq!(p.a_w[&1][0], 3);
        assert_eq!(p.l, [0, 1, 0]);
        assert_eq!((p.s, p.t, p.r, p.d), (2, 2, 1, Some(2)));
        assert!(p.identities_hold());
    }

    #[test]
    fn self_pairing_profile() {
        let p = block_profile(&cw(V), &cw(V), SigmaAction::new(6)).unwrap();
        assert_eq!(p.l[0], p.j_v.len());
        assert_eq!((p.s, p.t), (0, 0));
        assert_eq!(p.weights.v_plus_w, 0);
        assert!(p.identities_hold());
    }

    #[test]
    fn profile_rejects_odd_block() {
        let e = block_profile(&cw("100 000"), &cw("110 000"), SigmaAction::new(2));
        assert_eq!(e, Err(Error::OddBlock { block: 1 }));
    }
}
