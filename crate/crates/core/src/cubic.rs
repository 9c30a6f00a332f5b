//! The cubic construction: a binary code `B` and an F4-linear code `Q` of
//! length `m` give a σ-invariant binary code of length `3m` whose fixed part
//! is the image of `B` and whose even part is the image of `Q`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, LinearCode};
use crate::paut::{self, Equivalence, PautOptions, PautResult};
use crate::permgroup::StructureLabel;

/// `q0 + q1·ω` with `ω² = ω + 1`, stored as `q0 | q1 << 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct F4Elem(u8);

impl F4Elem {
    pub const ZERO: F4Elem = F4Elem(0);
    pub const ONE: F4Elem = F4Elem(1);
    pub const OMEGA: F4Elem = F4Elem(2);
    pub const OMEGA2: F4Elem = F4Elem(3);
    pub const ALL: [F4Elem; 4] = [F4Elem(0), F4Elem(1), F4Elem(2), F4Elem(3)];

    pub fn new(q0: bool, q1: bool) -> Self {
        F4Elem(q0 as u8 | (q1 as u8) << 1)
    }

    /// Inverse of [`F4Elem::code`]; `None` above 3.
    pub fn from_code(d: u8) -> Option<Self> {
        (d < 4).then_some(F4Elem(d))
    }

    /// Digit `q0 + 2·q1`.
    pub fn code(self) -> u8 {
        self.0
    }

    pub fn q0(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn q1(self) -> bool {
        self.0 & 2 == 2
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Panics on zero.
    pub fn inverse(self) -> F4Elem {
        match self.0 {
            1 => F4Elem::ONE,
            2 => F4Elem::OMEGA2,
            3 => F4Elem::OMEGA,
            _ => panic!("zero has no inverse"),
        }
    }
}

impl Add for F4Elem {
    type Output = F4Elem;

    /// Characteristic 2: addition is coefficientwise xor.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: F4Elem) -> F4Elem {
        F4Elem(self.0 ^ o.0)
    }
}

impl Mul for F4Elem {
    type Output = F4Elem;

    fn mul(self, o: F4Elem) -> F4Elem {
        let (a0, a1, b0, b1) = (self.q0(), self.q1(), o.q0(), o.q1());
        F4Elem::new((a0 & b0) ^ (a1 & b1), (a0 & b1) ^ (a1 & b0) ^ (a1 & b1))
    }
}

impl fmt::Display for F4Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Blocks `(c1, c2, c3)` of the polynomial `c1 + c2·Y + c3·Y²` that takes
/// the value `b` at `Y = 1` and `q` at `Y = ω`.
pub fn crt_block(b: bool, q: F4Elem) -> [bool; 3] {
    [b ^ q.q1(), b ^ q.q0(), b ^ q.q0() ^ q.q1()]
}

/// F4-linear code of length `m`, held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuaternaryCode {
    m: usize,
    rows: Vec<Vec<F4Elem>>,
}

impl QuaternaryCode {
    pub fn zero(m: usize) -> Self {
        QuaternaryCode { m, rows: Vec::new() }
    }

    pub fn from_rows(m: usize, rows: Vec<Vec<F4Elem>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::LengthMismatch { expected: m, found: r.len() });
        }
        Ok(QuaternaryCode { m, rows: rref_f4(rows) })
    }

    /// Rows of digits `0..=3` (digit = `q0 + 2·q1`), separators ignored.
    pub fn from_digit_rows(m: usize, rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| {
                        c.to_digit(4)
                            .map(|d| F4Elem(d as u8))
                            .ok_or_else(|| Error::Structure(format!("invalid F4 digit {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(m, parsed)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<F4Elem>] {
        &self.rows
    }

    pub fn contains(&self, v: &[F4Elem]) -> bool {
        if v.len() != self.m {
            return false;
        }
        let mut v = v.to_vec();
        for r in &self.rows {
            let p = r.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            if !v[p].is_zero() {
                let c = v[p];
                for (x, y) in v.iter_mut().zip(r) {
                    *x = *x + c * *y;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

/// Parses `m k` followed by `k` rows of digits `0..=3` (digit = `q0 + 2·q1`).
/// Whitespace, `|` and `.` separate; `#` starts a comment.
pub fn parse_quaternary_file(text: &str) -> Result<QuaternaryCode> {
    let err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
    let mut header: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some((m, k)) = header else {
            let toks: Vec<&str> = content.split_whitespace().collect();
            let [m, k] = toks[..] else {
                return Err(err(line, 1, "expected header `m k`".into()));
            };
            let num = |t: &str| t.parse::<usize>().map_err(|_| err(line, 1, format!("invalid number {t:?}")));
            header = Some((num(m)?, num(k)?));
            continue;
        };
        if rows.len() == k {
            return Err(err(line, 1, format!("more than {k} rows")));
        }
        let mut row = Vec::with_capacity(m);
        for (col, ch) in content.chars().enumerate() {
            match ch.to_digit(4) {
                Some(d) => row.push(F4Elem(d as u8)),
                None if ch.is_whitespace() || ch == '|' || ch == '.' => {}
                None => return Err(err(line, col + 1, format!("unexpected character {ch:?}"))),
            }
        }
        if row.len() != m {
            return Err(err(line, 1, format!("row has {} symbols, expected {m}", row.len())));
        }
        rows.push(row);
    }
    let Some((m, k)) = header else {
        return Err(err(1, 1, "missing header `m k`".into()));
    };
    if rows.len() != k {
        return Err(err(text.lines().count().max(1), 1, format!("expected {k} rows, found {}", rows.len())));
    }
    QuaternaryCode::from_rows(m, rows)
}

fn rref_f4(mut rows: Vec<Vec<F4Elem>>) -> Vec<Vec<F4Elem>> {
    let m = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse();
        for x in rows[rank].iter_mut() {
            *x = *x * inv;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let c = row[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = *x + c * *y;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Input to the cubic construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicPair {
    pub b: LinearCode,
    pub q: QuaternaryCode,
}

impl CubicPair {
    pub fn new(b: LinearCode, q: QuaternaryCode) -> Result<Self> {
        if b.len() != q.len() {
            return Err(Error::LengthMismatch { expected: b.len(), found: q.len() });
        }
        Ok(CubicPair { b, q })
    }

    /// `dim B + 2·dim Q`.
    pub fn dim(&self) -> usize {
        self.b.dim() + 2 * self.q.dim()
    }
}

fn blocks_word(m: usize, f: impl Fn(usize) -> [bool; 3]) -> Codeword {
    let mut w = Codeword::zeros(3 * m);
    for j in 0..m {
        for (t, bit) in f(j).into_iter().enumerate() {
            w.set(3 * j + t, bit);
        }
    }
    w
}

/// Cubic construction of `(B, Q)`. The result has length `3m` and
/// dimension `dim B + 2·dim Q`.
pub fn build_cubic(p: &CubicPair) -> Result<LinearCode> {
    let m = p.b.len();
    if p.q.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: p.q.len() });
    }
    let mut rows = Vec::with_capacity(p.dim());
    for b in p.b.generator().rows() {
        rows.push(blocks_word(m, |j| crt_block(b.get(j), F4Elem::ZERO)));
    }
    for q in p.q.rows() {
        rows.push(blocks_word(m, |j| crt_block(false, q[j])));
        rows.push(blocks_word(m, |j| crt_block(false, F4Elem::OMEGA * q[j])));
    }
    LinearCode::from_rows(3 * m, rows)
}

/// Number of `k`-dimensional subspaces of `F_q^m`.
pub fn gaussian_binomial(m: usize, k: usize, q: u32) -> BigUint {
    if k > m {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..k {
        num *= q.pow((m - i) as u32) - &one;
        den *= q.pow((i + 1) as u32) - &one;
    }
    num / den
}

/// Dimension splits `(dim B, dim Q)` with `dim B + 2·dim Q = k`.
pub fn dimension_splits(m: usize, k: usize) -> Vec<(usize, usize)> {
    (0..=k / 2)
        .rev()
        .map(|kq| (k - 2 * kq, kq))
        .filter(|&(kb, kq)| kb <= m && kq <= m)
        .collect()
}

/// Number of pairs `(B, Q)` of length `m` with `dim B + 2·dim Q = k`.
pub fn count_cubic_pairs(m: usize, k: usize) -> BigUint {
    dimension_splits(m, k)
        .into_iter()
        .map(|(kb, kq)| gaussian_binomial(m, kb, 2) * gaussian_binomial(m, kq, 4))
        .sum()
}

/// All `k`-dimensional subspaces of `F_q^m` (`q` ∈ {2, 4}) as RREF matrices
/// over digits `0..q`, each exactly once.
struct Subspaces {
    m: usize,
    k: usize,
    q: u8,
    pivots: Option<Vec<usize>>,
    /// Free positions `(row, col)` of the current pivot set.
    free: Vec<(usize, usize)>,
    counter: Vec<u8>,
    fresh: bool,
}

impl Subspaces {
    fn new(m: usize, k: usize, q: u8) -> Self {
        let pivots = (k <= m).then(|| (0..k).collect());
        let mut s = Subspaces { m, k, q, pivots, free: Vec::new(), counter: Vec::new(), fresh: true };
        s.reset_free();
        s
    }

    fn reset_free(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            for (i, &pc) in p.iter().enumerate() {
                for c in pc + 1..self.m {
                    if !p.contains(&c) {
                        self.free.push((i, c));
                    }
                }
            }
        }
        self.counter = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn next_pivots(&mut self) -> bool {
        let Some(p) = self.pivots.as_mut() else { return false };
        let (m, k) = (self.m, self.k);
        let Some(i) = (0..k).rev().find(|&i| p[i] < m - k + i) else {
            self.pivots = None;
            return false;
        };
        p[i] += 1;
        for j in i + 1..k {
            p[j] = p[j - 1] + 1;
        }
        self.reset_free();
        true
    }

    fn advance_counter(&mut self) -> bool {
        for d in self.counter.iter_mut() {
            *d += 1;
            if *d < self.q {
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for Subspaces {
    type Item = Vec<Vec<u8>>;

    fn next(&mut self) -> Option<Self::Item> {
        self.pivots.as_ref()?;
        if self.fresh {
            self.fresh = false;
        } else if !self.advance_counter() {
            if !self.next_pivots() {
                return None;
            }
            self.fresh = false;
        }
        let p = self.pivots.as_ref()?;
        let mut rows = vec![vec![0u8; self.m]; self.k];
        for (i, &pc) in p.iter().enumerate() {
            rows[i][pc] = 1;
        }
        for (&(i, c), &d) in self.free.iter().zip(&self.counter) {
            rows[i][c] = d;
        }
        Some(rows)
    }
}

/// Every `dim`-dimensional binary code of length `m`, each once.
pub fn binary_subspaces(m: usize, dim: usize) -> impl Iterator<Item = LinearCode> {
    Subspaces::new(m, dim, 2).map(move |rows| {
        let rows = rows
            .into_iter()
            .map(|r| Codeword::from_bits(&r.iter().map(|&d| d == 1).collect::<Vec<_>>()))
            .collect();
        LinearCode::from_rows(m, rows).expect("rows have length m")
    })
}

/// Every `dim`-dimensional F4-linear code of length `m`, each once.
pub fn quaternary_subspaces(m: usize, dim: usize) -> impl Iterator<Item = QuaternaryCode> {
    Subspaces::new(m, dim, 4).map(move |rows| QuaternaryCode {
        m,
        rows: rows.into_iter().map(|r| r.into_iter().map(F4Elem).collect()).collect(),
    })
}

/// Every pair `(B, Q)` of length `m` with `dim B + 2·dim Q = k`, refusing
/// when their number exceeds `budget`.
pub fn enumerate_pairs(m: usize, k: usize, budget: u64) -> Result<impl Iterator<Item = CubicPair>> {
    let count = count_cubic_pairs(m, k);
    if count > BigUint::from(budget) {
        let value = u128::try_from(&count).unwrap_or(u128::MAX);
        return Err(Error::guard("cubic pair count", value, budget));
    }
    Ok(dimension_splits(m, k).into_iter().flat_map(move |(kb, kq)| {
        let bs: Vec<LinearCode> = binary_subspaces(m, kb).collect();
        quaternary_subspaces(m, kq).flat_map(move |q| {
            bs.clone().into_iter().map(move |b| CubicPair { b, q: q.clone() })
        })
    }))
}

/// Every cubic code of length `3m` and dimension `k`, one per pair.
pub fn enumerate_cubic(m: usize, k: usize, budget: u64) -> Result<impl Iterator<Item = LinearCode>> {
    Ok(enumerate_pairs(m, k, budget)?.map(|p| build_cubic(&p).expect("pair lengths agree")))
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub paut: PautOptions,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

/// One equivalence class of a census.
#[derive(Clone, Debug)]
pub struct CensusClass {
    /// Lexicographically smallest reduced generator among the members.
    pub representative: LinearCode,
    pub members: u64,
    pub paut_order: BigUint,
    pub fingerprint: StructureLabel,
    /// False when a PAut or equivalence search hit its deadline.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub codes: u64,
    /// Sorted by representative.
    pub classes: Vec<CensusClass>,
    pub elapsed: Duration,
}

impl Census {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn min_order(&self) -> Option<BigUint> {
        self.classes.iter().map(|c| c.paut_order.clone()).min()
    }

    /// Distinct labels of the classes attaining the minimum order.
    pub fn min_fingerprints(&self) -> Vec<StructureLabel> {
        let Some(min) = self.min_order() else { return Vec::new() };
        let mut labels: Vec<StructureLabel> = Vec::new();
        for c in self.classes.iter().filter(|c| c.paut_order == min) {
            if !labels.contains(&c.fingerprint) {
                labels.push(c.fingerprint.clone());
            }
        }
        labels
    }

    pub fn exact(&self) -> bool {
        self.classes.iter().all(|c| c.exact)
    }
}

type BucketKey = (Vec<u64>, Vec<paut::CoordinateSignature>);

fn bucket_key(c: &LinearCode) -> Result<BucketKey> {
    Ok((c.weight_enumerator()?, paut::signature_multiset(c, c.len())?))
}

fn generator_key(c: &LinearCode) -> Vec<String> {
    c.generator().rows().iter().map(Codeword::to_string).collect()
}

struct Class {
    rep: LinearCode,
    aut: PautResult,
    min: LinearCode,
    members: u64,
    exact: bool,
}

fn classify_bucket(codes: Vec<LinearCode>, opts: &PautOptions) -> Result<Vec<Class>> {
    let mut classes: Vec<Class> = Vec::new();
    'codes: for c in codes {
        let mut uncertain = false;
        for cl in classes.iter_mut() {
            match paut::are_equivalent_with(&cl.rep, &c, Some(&cl.aut), opts)? {
                Equivalence::Equivalent(_) => {
                    cl.members += 1;
                    if generator_key(&c) < generator_key(&cl.min) {
                        cl.min = c;
                    }
                    continue 'codes;
                }
                Equivalence::NotEquivalent => {}
                Equivalence::Unknown => uncertain = true,
            }
        }
        let aut = paut::paut_with(&c, opts)?;
        let exact = aut.exact && !uncertain;
        classes.push(Class { rep: c.clone(), aut, min: c, members: 1, exact });
    }
    Ok(classes)
}

/// Splits `codes` into permutation-equivalence classes. Codes are bucketed
/// by weight enumerator and coordinate-signature multiset; each bucket is
/// resolved by pairwise equivalence search against its class leaders.
pub fn classify(codes: Vec<LinearCode>, opts: &ClassifyOptions) -> Result<Census> {
    let run = || classify_inner(codes, &opts.paut);
    match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Structure(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn classify_inner(codes: Vec<LinearCode>, opts: &PautOptions) -> Result<Census> {
    let start = Instant::now();
    let total = codes.len() as u64;
    let keyed = codes
        .into_par_iter()
        .map(|c| bucket_key(&c).map(|k| (k, c)))
        .collect::<Result<Vec<_>>>()?;
    let mut buckets: HashMap<BucketKey, Vec<LinearCode>> = HashMap::new();
    for (k, c) in keyed {
        buckets.entry(k).or_default().push(c);
    }
    let mut buckets: Vec<Vec<LinearCode>> = buckets.into_values().collect();
    // Largest buckets first keeps the pool busy.
    buckets.sort_by_key(|b| std::cmp::Reverse(b.len()));
    let classes = buckets
        .into_par_iter()
        .map(|b| classify_bucket(b, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<CensusClass> = classes
        .into_iter()
        .flatten()
        .map(|c| CensusClass {
            paut_order: c.aut.order(),
            fingerprint: c.aut.group.fingerprint(),
            representative: c.min,
            members: c.members,
            exact: c.exact,
        })
        .collect();
    classes.sort_by_cached_key(|c| generator_key(&c.representative));
    Ok(Census { codes: total, classes, elapsed: start.elapsed() })
}
