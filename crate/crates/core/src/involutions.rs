//! Explicit involutions in the permutation automorphism group of small
//! sigma-invariant codes, built blockwise from a pair basis `{v, w, v^s, w^s}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, LinearCode};
use crate::permgroup::Permutation;
use crate::sigma::{
    block_profile, huffman_decompose, is_sigma_invariant, orbit_weight_classify, BlockProfile,
    OrbitWeightClass, SigmaAction,
};

/// Which construction produced an involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `dim E = 2`: swap the zeros of `v` and `v^s` in every nonzero block.
    SingleOrbit,
    /// Equal-weight pair without zero blocks: one transposition per block.
    EqualWeightFull,
    /// Equal-weight pair with zero blocks: matched, free and cross-block parts.
    EqualWeightPartial,
    /// Two zero blocks of `v` where `w` is nonzero in both or zero in both.
    ZeroBlocksMatched,
    /// Two zero blocks of `v`, one of them also zero in `w`.
    ZeroBlockCommon,
    /// Unique zero block of `v`: rerun on `(v^(s^i) + w, w)`.
    ReducedSum,
    /// Fixed part present, three blocks where `v^(s^i)` equals `w`.
    FixedMatchedBlocks,
    /// Fixed part present, three zero blocks of one word opposite the other.
    FixedZeroBlocks,
    /// Fixed part present, a block where both `v` and `w` vanish.
    CommonZeroBlock,
}

impl Construction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Construction::SingleOrbit => "single-orbit",
            Construction::EqualWeightFull => "equal-weight-full",
            Construction::EqualWeightPartial => "equal-weight-partial",
            Construction::ZeroBlocksMatched => "zero-blocks-matched",
            Construction::ZeroBlockCommon => "zero-block-common",
            Construction::ReducedSum => "reduced-sum",
            Construction::FixedMatchedBlocks => "fixed-matched-blocks",
            Construction::FixedZeroBlocks => "fixed-zero-blocks",
            Construction::CommonZeroBlock => "common-zero-block",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Machine-readable reason a construction does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NotApplicable {
    NotSigmaInvariant,
    EvenDimension { expected: usize, found: usize },
    CodeDimension { expected: usize, found: usize },
    FixedPartPresent { dim: usize },
    OrbitClass { expected: OrbitWeightClass },
    /// No pair basis has a zero block in either word.
    NoZeroBlock,
    /// Distinct case with a unique zero block but every `l_i < 2`.
    NoRepeatedMatch,
    /// Every pair has `l_i <= 2`, `s, t <= 2` and `r = 0`.
    SmallPattern { l: [usize; 3], s: usize, t: usize, r: usize },
}

impl fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotApplicable::NotSigmaInvariant => write!(f, "code is not sigma-invariant"),
            NotApplicable::EvenDimension { expected, found } => {
                write!(f, "dim E is {found}, construction needs {expected}")
            }
            NotApplicable::CodeDimension { expected, found } => {
                write!(f, "dim C is {found}, construction needs {expected}")
            }
            NotApplicable::FixedPartPresent { dim } => {
                write!(f, "fixed subcode has dimension {dim}, construction needs 0")
            }
            NotApplicable::OrbitClass { expected } => {
                write!(f, "orbit weights are not {expected:?}")
            }
            NotApplicable::NoZeroBlock => write!(f, "no basis word has a zero block"),
            NotApplicable::NoRepeatedMatch => {
                write!(f, "unique zero block but no l_i reaches 2")
            }
            NotApplicable::SmallPattern { l, s, t, r } => write!(
                f,
                "every pair has l = {l:?}, s = {s}, t = {t}, r = {r}; \
                 no blockwise transposition is forced"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum InvolutionResult {
    Found {
        #[serde(serialize_with = "serialize_display")]
        permutation: Permutation,
        construction: Construction,
        /// Words the recipe started from: `[v]` or `[v, w]`.
        #[serde(serialize_with = "serialize_words")]
        basis: Vec<Codeword>,
    },
    NotApplicable(NotApplicable),
}

fn serialize_display<S: serde::Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn serialize_words<S: serde::Serializer>(v: &[Codeword], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|w| w.grouped(3)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionOutcome {
    #[serde(flatten)]
    pub result: InvolutionResult,
    /// `alpha^-1 sigma alpha = sigma^-1`.
    pub conjugates_sigma_to_inverse: bool,
}

impl InvolutionOutcome {
    fn found(p: Permutation, construction: Construction, action: SigmaAction, basis: Vec<Codeword>) -> Self {
        debug_assert!(p.is_involution());
        let s = action.permutation();
        let inverts = p.inverse().then(&s).then(&p) == s.inverse();
        Self {
            result: InvolutionResult::Found {
                permutation: p,
                construction,
                basis,
            },
            conjugates_sigma_to_inverse: inverts,
        }
    }

    fn not_applicable(reason: NotApplicable) -> Self {
        Self {
            result: InvolutionResult::NotApplicable(reason),
            conjugates_sigma_to_inverse: false,
        }
    }

    pub fn permutation(&self) -> Option<&Permutation> {
        match &self.result {
            InvolutionResult::Found { permutation, .. } => Some(permutation),
            InvolutionResult::NotApplicable(_) => None,
        }
    }

    pub fn basis(&self) -> &[Codeword] {
        match &self.result {
            InvolutionResult::Found { basis, .. } => basis,
            InvolutionResult::NotApplicable(_) => &[],
        }
    }

    pub fn construction(&self) -> Option<Construction> {
        match &self.result {
            InvolutionResult::Found { construction, .. } => Some(*construction),
            InvolutionResult::NotApplicable(_) => None,
        }
    }

    pub fn reason(&self) -> Option<&NotApplicable> {
        match &self.result {
            InvolutionResult::Found { .. } => None,
            InvolutionResult::NotApplicable(r) => Some(r),
        }
    }
}

/// True iff every generator row of `c` maps into `c` under `p`.
pub fn verify_automorphism(c: &LinearCode, p: &Permutation) -> Result<bool> {
    if p.degree() != c.len() {
        return Err(Error::DegreeMismatch {
            expected: c.len(),
            found: p.degree(),
        });
    }
    Ok(c
        .generator()
        .rows()
        .iter()
        .all(|r| c.contains(&p.apply_word_unchecked(r))))
}

/// The orbit member whose first nonzero block reads `110`.
pub fn leading_member(v: &Codeword, action: SigmaAction) -> Codeword {
    (0..3)
        .map(|p| action.apply_unchecked(v, p))
        .max()
        .expect("three rotations")
}

/// Leading members of the nonzero orbits, in decreasing order.
fn orbit_leaders(c: &LinearCode, action: SigmaAction) -> Result<Vec<Codeword>> {
    let cls = orbit_weight_classify(c)?;
    let mut out: Vec<Codeword> = cls
        .orbits
        .iter()
        .filter(|o| o.weight > 0)
        .map(|o| leading_member(&o.representative, action))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Ordered pairs of leaders of distinct orbits: `(v, w)` with `v` earlier.
fn leader_pairs(leaders: &[Codeword]) -> impl Iterator<Item = (&Codeword, &Codeword)> {
    leaders
        .iter()
        .enumerate()
        .flat_map(move |(i, v)| leaders[i + 1..].iter().map(move |w| (v, w)))
}

fn smallest_two(action: SigmaAction, block: usize) -> (usize, usize) {
    let [a, b, _] = action.block(block);
    (a, b)
}

/// The transposition of the two ones of a nonzero even block; it fixes the block.
fn ones_of(action: SigmaAction, v: &Codeword, block: usize) -> (usize, usize) {
    let z = zero_position(action, v, block);
    let [a, b, c] = action.block(block);
    match z - a {
        0 => (b, c),
        1 => (a, c),
        _ => (a, b),
    }
}

fn zero_position(action: SigmaAction, v: &Codeword, block: usize) -> usize {
    action
        .block(block)
        .into_iter()
        .find(|&x| !v.get(x))
        .expect("nonzero even block has a zero")
}

fn transposition(n: usize, pairs: &[(usize, usize)]) -> Permutation {
    Permutation::from_transpositions(n, pairs).expect("disjoint in-block transpositions")
}

fn e_code_with_dim(c: &LinearCode) -> Result<std::result::Result<(SigmaAction, usize, usize), NotApplicable>> {
    let action = SigmaAction::for_length(c.len())?;
    if !is_sigma_invariant(c)? {
        return Ok(Err(NotApplicable::NotSigmaInvariant));
    }
    let d = huffman_decompose(c)?;
    Ok(Ok((action, d.fixed.dim(), d.even.dim())))
}

/// Single-orbit construction for codes whose even-block part has dimension 2.
/// The result fixes every blockwise-constant word.
pub fn involution_dim_e2(c: &LinearCode) -> Result<InvolutionOutcome> {
    let (action, _, de) = match e_code_with_dim(c)? {
        Ok(x) => x,
        Err(r) => return Ok(InvolutionOutcome::not_applicable(r)),
    };
    if de != 2 {
        return Ok(InvolutionOutcome::not_applicable(NotApplicable::EvenDimension {
            expected: 2,
            found: de,
        }));
    }
    let e = huffman_decompose(c)?.even;
    let v = leading_member(&e.generator().rows()[0], action);
    let w = action.apply_unchecked(&v, 1);
    let pairs: Vec<(usize, usize)> = (0..action.blocks())
        .filter(|&b| action.block_bits(&v, b) != 0)
        .map(|b| (zero_position(action, &v, b), zero_position(action, &w, b)))
        .collect();
    let p = transposition(c.len(), &pairs);
    Ok(InvolutionOutcome::found(p, Construction::SingleOrbit, action, vec![v]))
}

/// The bijection `f` from block `a` to block `b` with `f(za) = zb` and
/// `f . s_a = s_b^-1 . f`, extended to an involution. Unique.
fn cross_block(action: SigmaAction, a: usize, za: usize, b: usize, zb: usize) -> Vec<(usize, usize)> {
    let n = action.length();
    let sa = Permutation::from_cycles(n, &[&[3 * a + 1, 3 * a + 2, 3 * a + 3]]).expect("3-cycle");
    let sb = Permutation::from_cycles(n, &[&[3 * b + 1, 3 * b + 2, 3 * b + 3]]).expect("3-cycle");
    let prod = sa.then(&sb);
    let target = prod.inverse();
    let ba = action.block(a);
    let bb = action.block(b);
    let mut found = Vec::new();
    for perm in PERMS3 {
        let pairs: Vec<(usize, usize)> = (0..3).map(|i| (ba[i], bb[perm[i]])).collect();
        if !pairs.contains(&(za, zb)) {
            continue;
        }
        let t = transposition(n, &pairs);
        if t.inverse().then(&prod).then(&t) == target {
            found.push(pairs);
        }
    }
    debug_assert_eq!(found.len(), 1);
    found.swap_remove(0)
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Equal-weight recipe for an explicit pair; returns `alpha` with `v^alpha = w`
/// and `alpha^-1 sigma alpha = sigma^-1`.
pub fn equal_weight_involution(
    v: &Codeword,
    w: &Codeword,
    action: SigmaAction,
) -> Result<(Permutation, Construction)> {
    let p = block_profile(v, w, action)?;
    if v.weight() != w.weight() || v.is_zero() {
        return Err(Error::Structure(format!(
            "pair weights {} and {} are not equal and nonzero",
            v.weight(),
            w.weight()
        )));
    }
    let mut pairs = Vec::new();
    for b in p.j_v.intersection(&p.j_w).copied() {
        let (zv, zw) = (zero_position(action, v, b), zero_position(action, w, b));
        pairs.push(if zv == zw { ones_of(action, v, b) } else { (zv, zw) });
    }
    for b in p.common_zero_blocks() {
        pairs.push(smallest_two(action, b));
    }
    for (&a, &b) in p.r_w.iter().zip(&p.r_v) {
        pairs.extend(cross_block(
            action,
            a,
            zero_position(action, v, a),
            b,
            zero_position(action, w, b),
        ));
    }
    let construction = if p.j_v.len() == action.blocks() {
        Construction::EqualWeightFull
    } else {
        Construction::EqualWeightPartial
    };
    Ok((transposition(action.length(), &pairs), construction))
}

fn dim4_even_checks(c: &LinearCode, class: OrbitWeightClass) -> Result<std::result::Result<SigmaAction, NotApplicable>> {
    let (action, df, de) = match e_code_with_dim(c)? {
        Ok(x) => x,
        Err(r) => return Ok(Err(r)),
    };
    if df != 0 {
        return Ok(Err(NotApplicable::FixedPartPresent { dim: df }));
    }
    if de != 4 {
        return Ok(Err(NotApplicable::EvenDimension {
            expected: 4,
            found: de,
        }));
    }
    if orbit_weight_classify(c)?.class != class {
        return Ok(Err(NotApplicable::OrbitClass { expected: class }));
    }
    Ok(Ok(action))
}

/// Equal-weight construction for 4-dimensional non-distinct even-block codes.
/// Scans leader pairs and takes the first with equal weights.
pub fn involution_nondistinct_dim4(c: &LinearCode) -> Result<InvolutionOutcome> {
    let action = match dim4_even_checks(c, OrbitWeightClass::NonDistinct)? {
        Ok(a) => a,
        Err(r) => return Ok(InvolutionOutcome::not_applicable(r)),
    };
    let leaders = orbit_leaders(c, action)?;
    let (v, w) = leader_pairs(&leaders)
        .find(|(v, w)| v.weight() == w.weight())
        .expect("non-distinct code has an equal-weight pair");
    let (p, tag) = equal_weight_involution(v, w, action)?;
    Ok(InvolutionOutcome::found(p, tag, action, vec![v.clone(), w.clone()]))
}

fn zero_blocks(action: SigmaAction, v: &Codeword) -> Vec<usize> {
    (0..action.blocks())
        .filter(|&b| action.block_bits(v, b) == 0)
        .collect()
}

/// Two-zero-block step for `v` with at least two zero blocks: returns the
/// transposition fixing every word of `<v, w, v^s, w^s>`.
fn two_zero_blocks(v: &Codeword, w: &Codeword, action: SigmaAction) -> Option<(Permutation, Construction)> {
    let zb = zero_blocks(action, v);
    if zb.len() < 2 {
        return None;
    }
    let (i, j) = (zb[0], zb[1]);
    let (wi, wj) = (action.block_bits(w, i), action.block_bits(w, j));
    let n = action.length();
    Some(match (wi == 0, wj == 0) {
        (false, false) => (
            transposition(n, &[(zero_position(action, w, i), zero_position(action, w, j))]),
            Construction::ZeroBlocksMatched,
        ),
        (true, true) => (
            transposition(n, &[(action.block(i)[0], action.block(j)[0])]),
            Construction::ZeroBlocksMatched,
        ),
        (true, false) => (
            transposition(n, &[smallest_two(action, i)]),
            Construction::ZeroBlockCommon,
        ),
        (false, true) => (
            transposition(n, &[smallest_two(action, j)]),
            Construction::ZeroBlockCommon,
        ),
    })
}

/// Distinct-weight recipe for an explicit pair basis.
pub fn distinct_weight_involution(
    v: &Codeword,
    w: &Codeword,
    action: SigmaAction,
) -> std::result::Result<(Permutation, Construction), NotApplicable> {
    for (a, b) in [(v, w), (w, v)] {
        if let Some(r) = two_zero_blocks(a, b, action) {
            return Ok(r);
        }
    }
    let (v, w) = if !zero_blocks(action, v).is_empty() {
        (v, w)
    } else if !zero_blocks(action, w).is_empty() {
        (w, v)
    } else {
        return Err(NotApplicable::NoZeroBlock);
    };
    let profile = block_profile(v, w, action).map_err(|_| NotApplicable::NoZeroBlock)?;
    let i = (0..3).find(|&i| profile.l[i] >= 2).ok_or(NotApplicable::NoRepeatedMatch)?;
    let u = action.apply_unchecked(v, i as u8).xor(w);
    let (p, _) = two_zero_blocks(&u, w, action).ok_or(NotApplicable::NoRepeatedMatch)?;
    Ok((p, Construction::ReducedSum))
}

/// Construction for 4-dimensional distinct even-block codes.
pub fn involution_distinct_dim4(c: &LinearCode) -> Result<InvolutionOutcome> {
    let action = match dim4_even_checks(c, OrbitWeightClass::Distinct)? {
        Ok(a) => a,
        Err(r) => return Ok(InvolutionOutcome::not_applicable(r)),
    };
    let leaders = orbit_leaders(c, action)?;
    let pairs: Vec<_> = leader_pairs(&leaders).collect();
    let direct = pairs.iter().find_map(|&(v, w)| {
        two_zero_blocks(v, w, action)
            .map(|r| (r, [v, w]))
            .or_else(|| two_zero_blocks(w, v, action).map(|r| (r, [w, v])))
    });
    if let Some(((p, tag), basis)) = direct {
        return Ok(InvolutionOutcome::found(p, tag, action, basis.map(Codeword::clone).to_vec()));
    }
    let mut last = NotApplicable::NoZeroBlock;
    for (v, w) in pairs {
        match distinct_weight_involution(v, w, action) {
            Ok((p, tag)) => return Ok(InvolutionOutcome::found(p, tag, action, vec![v.clone(), w.clone()])),
            Err(r) => last = r,
        }
    }
    Ok(InvolutionOutcome::not_applicable(last))
}

/// Fixed-part recipe for an explicit pair `(v, w)` and fixed word `z`.
pub fn fixed_part_involution(
    v: &Codeword,
    w: &Codeword,
    z: &Codeword,
    action: SigmaAction,
) -> Result<std::result::Result<(Permutation, Construction), NotApplicable>> {
    let p = block_profile(v, w, action)?;
    Ok(fixed_part_from_profile(&p, v, w, z, action))
}

fn agreeing_pair(blocks: &[usize], z: &Codeword, action: SigmaAction) -> Option<(usize, usize)> {
    let first3 = &blocks[..3.min(blocks.len())];
    for (x, &a) in first3.iter().enumerate() {
        for &b in &first3[x + 1..] {
            if action.block_bits(z, a) == action.block_bits(z, b) {
                return Some((a, b));
            }
        }
    }
    None
}

fn fixed_part_from_profile(
    p: &BlockProfile,
    v: &Codeword,
    w: &Codeword,
    z: &Codeword,
    action: SigmaAction,
) -> std::result::Result<(Permutation, Construction), NotApplicable> {
    let n = action.length();
    for i in 0..3 {
        if p.l[i] >= 3 {
            let vi = action.apply_unchecked(v, i as u8);
            let matched = p.matched_blocks(i, v, w);
            let (a, b) = agreeing_pair(&matched, z, action).expect("pigeonhole on constant blocks");
            let t = transposition(n, &[(zero_position(action, &vi, a), zero_position(action, &vi, b))]);
            return Ok((t, Construction::FixedMatchedBlocks));
        }
    }
    for (only, word) in [(&p.r_w, v), (&p.r_v, w)] {
        if only.len() >= 3 {
            let (a, b) = agreeing_pair(only, z, action).expect("pigeonhole on constant blocks");
            let t = transposition(n, &[(zero_position(action, word, a), zero_position(action, word, b))]);
            return Ok((t, Construction::FixedZeroBlocks));
        }
    }
    if let Some(&b) = p.common_zero_blocks().first() {
        return Ok((transposition(n, &[smallest_two(action, b)]), Construction::CommonZeroBlock));
    }
    Err(NotApplicable::SmallPattern {
        l: p.l,
        s: p.s,
        t: p.t,
        r: p.r,
    })
}

/// Constructions for 5-dimensional codes with a 1-dimensional fixed part.
pub fn involution_dim5(c: &LinearCode) -> Result<InvolutionOutcome> {
    let (action, df, de) = match e_code_with_dim(c)? {
        Ok(x) => x,
        Err(r) => return Ok(InvolutionOutcome::not_applicable(r)),
    };
    if c.dim() != 5 {
        return Ok(InvolutionOutcome::not_applicable(NotApplicable::CodeDimension {
            expected: 5,
            found: c.dim(),
        }));
    }
    if de != 4 {
        return Ok(InvolutionOutcome::not_applicable(NotApplicable::EvenDimension {
            expected: 4,
            found: de,
        }));
    }
    debug_assert_eq!(df, 1);
    let d = huffman_decompose(c)?;
    let z = d.fixed.generator().rows()[0].clone();
    let leaders = orbit_leaders(&d.even, action)?;
    let mut pairs: Vec<_> = leader_pairs(&leaders).collect();
    // Equal-weight pairs first.
    pairs.sort_by_key(|(v, w)| v.weight() != w.weight());
    let mut last = None;
    for (v, w) in pairs {
        let profile = block_profile(v, w, action)?;
        match fixed_part_from_profile(&profile, v, w, &z, action) {
            Ok((p, tag)) => return Ok(InvolutionOutcome::found(p, tag, action, vec![v.clone(), w.clone()])),
            Err(r) => {
                last.get_or_insert(r);
            }
        }
    }
    Ok(InvolutionOutcome::not_applicable(
        last.unwrap_or(NotApplicable::NoZeroBlock),
    ))
}

/// Runs the construction matching the dimensions of `c`.
pub fn construct_involution(c: &LinearCode) -> Result<InvolutionOutcome> {
    let (_, df, de) = match e_code_with_dim(c)? {
        Ok(x) => x,
        Err(r) => return Ok(InvolutionOutcome::not_applicable(r)),
    };
    if de == 2 {
        return involution_dim_e2(c);
    }
    match (df, de) {
        (0, 4) => {
            if orbit_weight_classify(c)?.class == OrbitWeightClass::NonDistinct {
                involution_nondistinct_dim4(c)
            } else {
                involution_distinct_dim4(c)
            }
        }
        (1, 4) => involution_dim5(c),
        _ => Ok(InvolutionOutcome::not_applicable(NotApplicable::EvenDimension {
            expected: 4,
            found: de,
        })),
    }
}
