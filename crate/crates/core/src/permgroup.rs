//! Permutations of `{1..n}` and permutation groups with a stabilizer chain.
//!
//! Permutations act on the right: `v^(pq) = (v^p)^q`, so `p.compose(q)` maps
//! `x` to `q(p(x))`. A word `v` is moved by `p` so that the bit at coordinate
//! `i` ends up at `p(i)`, i.e. `(v^p)_j = v_{p^-1(j)}`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, LinearCode};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            img: (0..degree as u32).collect(),
        }
    }

    /// From 0-based images; fails unless `images` is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "images {:?} are not a bijection",
                    images
                )));
            }
            seen[x] = true;
        }
        Ok(Self {
            img: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(img: Vec<u32>) -> Self {
        Self { img }
    }

    /// From 1-based cycles, e.g. `&[&[1, 4], &[2, 6]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut img: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears twice"
                    )));
                }
                used[p - 1] = true;
                img[p - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Self::from_images(img)
    }

    /// Product of the given 0-based transpositions (they must be disjoint).
    pub fn from_transpositions(degree: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut img: Vec<usize> = (0..degree).collect();
        for &(a, b) in pairs {
            if a >= degree || b >= degree || a == b || img[a] != a || img[b] != b {
                return Err(Error::InvalidPermutation(format!(
                    "transposition ({}, {}) is not disjoint from the others",
                    a + 1,
                    b + 1
                )));
            }
            img.swap(a, b);
        }
        Self::from_images(img)
    }

    /// Parses disjoint-cycle notation such as `(1,2,3)(4,5,6)`; `()` is the identity.
    pub fn parse(degree: usize, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::InvalidPermutation(format!("expected '(' in {s:?}")));
            };
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {s:?}")))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let pts = inner
                    .split(',')
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::InvalidPermutation(format!("bad point {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(pts);
            }
            rest = &body[close + 1..];
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.img.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            img[x as usize] = i as u32;
        }
        Permutation { img }
    }

    pub fn power(&self, e: i64) -> Permutation {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// `self^-1 * g * self`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation> {
        self.check_degree(g)?;
        Ok(self.inverse().then(g).then(self))
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc / gcd(acc, c.len() as u64) * c.len() as u64)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.then(self).is_identity()
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images()
            .enumerate()
            .filter(|(i, x)| i != x)
            .map(|(i, _)| i)
    }

    /// The word `v^p`.
    pub fn apply_word(&self, v: &Codeword) -> Result<Codeword> {
        if v.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: v.len(),
                found: self.degree(),
            });
        }
        Ok(self.apply_word_unchecked(v))
    }

    pub(crate) fn apply_word_unchecked(&self, v: &Codeword) -> Codeword {
        let mut out = Codeword::zeros(v.len());
        for i in v.support() {
            out.set(self.apply(i), true);
        }
        out
    }

    /// The code `C^p`.
    pub fn apply_code(&self, c: &LinearCode) -> Result<LinearCode> {
        let rows = c
            .generator()
            .rows()
            .iter()
            .map(|r| self.apply_word(r))
            .collect::<Result<Vec<_>>>()?;
        LinearCode::from_rows(c.len(), rows)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses cycle notation with the degree set to the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Self::parse(degree, s)
    }
}

struct Level {
    base: usize,
    orbit: Vec<usize>,
    /// `trans[x]` maps the base point to `x`.
    trans: Vec<Option<Permutation>>,
    checked: HashSet<(usize, usize)>,
}

/// A permutation group with a stabilizer chain built by Schreier–Sims.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    strong: Vec<Permutation>,
    /// Level at which each strong generator is stored: the first base point it moves.
    strong_level: Vec<usize>,
    levels: Vec<Level>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let mut g = PermGroup::trivial(self.degree);
        for s in &self.generators {
            g.add_generator(s.clone());
        }
        g
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            strong: Vec::new(),
            strong_level: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Group generated by `gens`; redundant generators (already members) are dropped.
    pub fn from_generators(degree: usize, gens: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut g = Self::trivial(degree);
        for p in gens {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: p.degree(),
                });
            }
            g.add_generator(p);
        }
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order()).ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, _) = self.sift(p.clone(), 0);
        h.is_identity()
    }

    /// Adds a generator; returns false when it was already a member.
    pub fn add_generator(&mut self, p: Permutation) -> bool {
        assert_eq!(p.degree(), self.degree, "generator degree");
        let (h, j) = self.sift(p.clone(), 0);
        if h.is_identity() {
            return false;
        }
        self.generators.push(p);
        self.store(h, j);
        self.complete(j);
        true
    }

    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(level.base);
            match &level.trans[x] {
                None => return (g, i),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    fn store(&mut self, h: Permutation, level: usize) {
        if level == self.levels.len() {
            let base = h.moved_points().next().expect("non-identity");
            let mut trans = vec![None; self.degree];
            trans[base] = Some(Permutation::identity(self.degree));
            self.levels.push(Level {
                base,
                orbit: vec![base],
                trans,
                checked: HashSet::new(),
            });
        }
        self.strong.push(h);
        self.strong_level.push(level);
    }

    fn level_gens(&self, level: usize) -> Vec<usize> {
        (0..self.strong.len())
            .filter(|&s| self.strong_level[s] >= level)
            .collect()
    }

    fn extend_orbit(&mut self, level: usize) {
        let gens = self.level_gens(level);
        let lv = &mut self.levels[level];
        let mut idx = 0;
        // Existing transversal elements are kept, so earlier sifts stay valid.
        loop {
            let mut grew = false;
            while idx < lv.orbit.len() {
                let x = lv.orbit[idx];
                let ux = lv.trans[x].clone().expect("orbit point has transversal");
                for &s in &gens {
                    let y = self.strong[s].apply(x);
                    if lv.trans[y].is_none() {
                        lv.trans[y] = Some(ux.then(&self.strong[s]));
                        lv.orbit.push(y);
                        grew = true;
                    }
                }
                idx += 1;
            }
            if !grew {
                break;
            }
        }
    }

    fn complete(&mut self, start: usize) {
        let mut i = start.min(self.levels.len().saturating_sub(1)) as isize;
        while i >= 0 {
            let level = i as usize;
            self.extend_orbit(level);
            let gens = self.level_gens(level);
            let mut added = None;
            'scan: for oi in 0..self.levels[level].orbit.len() {
                let beta = self.levels[level].orbit[oi];
                for &s in &gens {
                    if !self.levels[level].checked.insert((beta, s)) {
                        continue;
                    }
                    let lv = &self.levels[level];
                    let img = self.strong[s].apply(beta);
                    let sg = lv.trans[beta]
                        .as_ref()
                        .expect("orbit point")
                        .then(&self.strong[s])
                        .then(&lv.trans[img].as_ref().expect("orbit closed").inverse());
                    let (h, j) = self.sift(sg, level + 1);
                    if !h.is_identity() {
                        self.store(h, j);
                        added = Some(j);
                        break 'scan;
                    }
                }
            }
            match added {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// All elements; only sensible for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        // g = t_last * ... * t_0 with t_i in the transversal of level i.
        for level in self.levels.iter().rev() {
            let reps: Vec<&Permutation> = level.orbit.iter().map(|&x| level.trans[x].as_ref().unwrap()).collect();
            let mut next = Vec::with_capacity(out.len() * reps.len());
            for g in &out {
                for u in &reps {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out
    }

    /// Orbits of the group on points, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.degree, &self.generators)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.then(b) == b.then(a))
        })
    }

    /// Serializable summary: cycle-notation generators plus the decimal order.
    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            degree: self.degree,
            order: self.order().to_string(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    /// Structure label for small groups; see [`StructureLabel`].
    pub fn fingerprint(&self) -> StructureLabel {
        fingerprint(self)
    }
}

/// Orbits of `<gens>` on `0..degree`.
pub fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut uf: Vec<usize> = (0..degree).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for g in gens {
        for x in 0..degree {
            let (a, b) = (find(&mut uf, x), find(&mut uf, g.apply(x)));
            if a != b {
                uf[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..degree {
        let r = find(&mut uf, x);
        by_root.entry(r).or_default().push(x);
    }
    by_root.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub order: String,
    pub generators: Vec<String>,
}

/// Largest order for which [`fingerprint`] enumerates elements.
pub const FINGERPRINT_LIMIT: u64 = 10_000;

/// Small-group structure labels distinguished by order, commutativity,
/// element-order histogram and centre size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StructureLabel {
    C3,
    S3,
    D12,
    S3xS3,
    C2xS4,
    Other {
        order: String,
        /// Element order -> count; empty when the group was too large to enumerate.
        histogram: BTreeMap<u64, u64>,
    },
}

impl fmt::Display for StructureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureLabel::C3 => f.write_str("C3"),
            StructureLabel::S3 => f.write_str("S3"),
            StructureLabel::D12 => f.write_str("D12"),
            StructureLabel::S3xS3 => f.write_str("S3xS3"),
            StructureLabel::C2xS4 => f.write_str("C2xS4"),
            StructureLabel::Other { order, .. } => write!(f, "Other({order})"),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct Signature {
    order: u64,
    abelian: bool,
    histogram: BTreeMap<u64, u64>,
    centre: u64,
}

fn signature(g: &PermGroup) -> Signature {
    let elements = g.elements();
    let mut histogram = BTreeMap::new();
    for e in &elements {
        *histogram.entry(e.order()).or_insert(0u64) += 1;
    }
    let centre = elements
        .iter()
        .filter(|e| g.generators.iter().all(|s| e.then(s) == s.then(e)))
        .count() as u64;
    Signature {
        order: elements.len() as u64,
        abelian: g.is_abelian(),
        histogram,
        centre,
    }
}

fn reference(degree: usize, gens: &[&str]) -> Signature {
    let gens = gens.iter().map(|s| Permutation::parse(degree, s).unwrap());
    signature(&PermGroup::from_generators(degree, gens).unwrap())
}

fn fingerprint(g: &PermGroup) -> StructureLabel {
    let order = g.order();
    match u64::try_from(&order) {
        Ok(o) if o <= FINGERPRINT_LIMIT => {}
        _ => {
            return StructureLabel::Other {
                order: order.to_string(),
                histogram: BTreeMap::new(),
            }
        }
    }
    let sig = signature(g);
    let candidates: [(StructureLabel, u64, &[&str], usize); 5] = [
        (StructureLabel::C3, 3, &["(1,2,3)"], 3),
        (StructureLabel::S3, 6, &["(1,2,3)", "(1,2)"], 3),
        (StructureLabel::D12, 12, &["(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)"], 6),
        (
            StructureLabel::S3xS3,
            36,
            &["(1,2,3)", "(1,2)", "(4,5,6)", "(4,5)"],
            6,
        ),
        (StructureLabel::C2xS4, 48, &["(1,2,3,4)", "(1,2)", "(5,6)"], 6),
    ];
    for (label, o, gens, degree) in candidates {
        if sig.order == o && reference(degree, gens) == sig {
            return label;
        }
    }
    StructureLabel::Other {
        order: order.to_string(),
        histogram: sig.histogram,
    }
}
