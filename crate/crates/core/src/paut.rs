//! Permutation automorphism groups and permutation equivalence of binary
//! codes of length at most 64.
//!
//! The search works on the bipartite incidence structure between coordinates
//! and an automorphism-invariant set of codewords. Nodes carry an ordered
//! partition refined to equitability; leaves are discrete coordinate
//! partitions. Automorphisms are found by base-image backtracking against the
//! first leaf, pruned by the orbits of the automorphisms already found.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, LinearCode};
use crate::permgroup::{PermGroup, Permutation};

/// Longest code handled by the refinement search.
pub const MAX_LENGTH: usize = 64;
/// Longest code handled by the brute-force oracle.
pub const MAX_BRUTE_LENGTH: usize = 8;
/// Dimension up to which every nonzero codeword joins the incidence structure.
pub const AUTO_ALL_WORDS_DIM: usize = 12;
const MAX_WORDS: usize = 1 << 20;

/// Which codewords form the incidence structure. Every choice is invariant
/// under the automorphism group, so only the pruning power changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WordSet {
    /// All nonzero codewords for small dimension, otherwise the lightest
    /// weight classes until they span the code.
    #[default]
    Auto,
    All,
    /// Nonzero codewords of weight at most the cap.
    WeightCap(usize),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PautOptions {
    pub words: WordSet,
    pub timeout: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct PautResult {
    pub group: PermGroup,
    /// False when the search stopped early; `group` is then a subgroup.
    pub exact: bool,
    pub elapsed: Duration,
    pub nodes: u64,
    /// First-path base; `strong` is a strong generating set relative to it.
    pub base: Vec<usize>,
    pub strong: Vec<Permutation>,
}

impl PautResult {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }
}

/// Number of codewords of each weight `0..=cap` covering one coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoordinateSignature(pub Vec<u64>);

/// Per-coordinate signatures; relabeling coordinates permutes them.
pub fn coordinate_signatures(c: &LinearCode, cap: usize) -> Result<Vec<CoordinateSignature>> {
    let n = c.len();
    let cap = cap.min(n);
    let mut sig = vec![vec![0u64; cap + 1]; n];
    c.for_each_codeword(|w| {
        let wt = w.weight();
        if wt <= cap {
            for i in w.support() {
                sig[i][wt] += 1;
            }
        }
    })?;
    Ok(sig.into_iter().map(CoordinateSignature).collect())
}

/// Sorted signatures: an equivalence invariant.
pub fn signature_multiset(c: &LinearCode, cap: usize) -> Result<Vec<CoordinateSignature>> {
    let mut s = coordinate_signatures(c, cap)?;
    s.sort();
    Ok(s)
}

fn bit(i: usize) -> u64 {
    1u64 << (63 - i)
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A code as `u64` masks with its incidence words.
struct Structure {
    n: usize,
    /// Reduced echelon rows with their pivot bits.
    rows: Vec<(u64, u64)>,
    /// Incidence words, sorted by weight.
    words: Vec<u64>,
    /// `(weight, count)` of each class, in `words` order.
    classes: Vec<(usize, usize)>,
}

impl Structure {
    fn new(c: &LinearCode, set: WordSet) -> Result<Self> {
        let n = c.len();
        if n > MAX_LENGTH {
            return Err(Error::guard("code length", n as u64, MAX_LENGTH as u64));
        }
        let rows: Vec<(u64, u64)> = c
            .generator()
            .rows()
            .iter()
            .zip(c.pivots())
            .map(|(r, &p)| (r.as_u64(), bit(p)))
            .collect();
        let mut by_weight: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        let k = c.dim();
        match set {
            WordSet::WeightCap(cap) => {
                c.for_each_codeword(|w| {
                    let wt = w.weight();
                    if wt > 0 && wt <= cap {
                        by_weight[wt].push(w.as_u64());
                    }
                })?;
            }
            WordSet::All => c.for_each_codeword(|w| {
                if !w.is_zero() {
                    by_weight[w.weight()].push(w.as_u64());
                }
            })?,
            WordSet::Auto => {
                c.for_each_codeword(|w| {
                    if !w.is_zero() {
                        by_weight[w.weight()].push(w.as_u64());
                    }
                })?;
                if k > AUTO_ALL_WORDS_DIM {
                    let mut span = LinearCode::zero(n);
                    let mut last = 0;
                    for (wt, class) in by_weight.iter().enumerate() {
                        if span.dim() == k {
                            break;
                        }
                        if class.is_empty() {
                            continue;
                        }
                        let words = class.iter().map(|&x| Codeword::from_u64(n, x)).collect();
                        span = span.sum(&LinearCode::from_rows(n, words)?)?;
                        last = wt;
                    }
                    for class in by_weight.iter_mut().skip(last + 1) {
                        class.clear();
                    }
                }
            }
        }
        let total: usize = by_weight.iter().map(Vec::len).sum();
        if total > MAX_WORDS {
            return Err(Error::guard("incidence words", total as u64, MAX_WORDS as u64));
        }
        let mut words = Vec::with_capacity(total);
        let mut classes = Vec::new();
        for (wt, mut class) in by_weight.into_iter().enumerate() {
            if class.is_empty() {
                continue;
            }
            class.sort_unstable();
            classes.push((wt, class.len()));
            words.extend(class);
        }
        Ok(Self {
            n,
            rows,
            words,
            classes,
        })
    }

    fn contains(&self, mut x: u64) -> bool {
        for &(r, p) in &self.rows {
            if x & p != 0 {
                x ^= r;
            }
        }
        x == 0
    }

    fn image(&self, img: &[u32], x: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = x;
        while rest != 0 {
            let lz = rest.leading_zeros() as usize;
            rest &= !bit(lz);
            out |= bit(img[lz] as usize);
        }
        out
    }

    /// True iff `img` maps every generator row into `target`.
    fn maps_into(&self, img: &[u32], target: &Structure) -> bool {
        self.rows.iter().all(|&(r, _)| target.contains(self.image(img, r)))
    }

    fn vertices(&self) -> usize {
        self.n + self.words.len()
    }
}

struct Trace<'r> {
    events: Vec<u64>,
    reference: Option<&'r [u64]>,
}

impl Trace<'_> {
    fn push(&mut self, h: u64) -> bool {
        let i = self.events.len();
        self.events.push(h);
        match self.reference {
            Some(r) => r.get(i) == Some(&h),
            None => true,
        }
    }

    fn complete(&self) -> bool {
        self.reference.is_none_or(|r| r.len() == self.events.len())
    }
}

/// Ordered partition of coordinates `0..n` followed by words `n..n+W`.
#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    /// Start position of the cell holding each vertex.
    cell: Vec<u32>,
    /// End position of the cell starting at each position.
    end: Vec<u32>,
    coord_cells: usize,
}

impl Partition {
    fn initial(st: &Structure) -> Self {
        let nv = st.vertices();
        let mut p = Partition {
            elems: (0..nv as u32).collect(),
            cell: vec![0; nv],
            end: vec![0; nv + 1],
            coord_cells: 1,
        };
        if st.n > 0 {
            p.end[0] = st.n as u32;
        } else {
            p.coord_cells = 0;
        }
        let mut s = st.n;
        for &(_, len) in &st.classes {
            for v in s..s + len {
                p.cell[v] = s as u32;
            }
            p.end[s] = (s + len) as u32;
            s += len;
        }
        p
    }

    fn cell_starts(&self, from: usize, to: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut p = from;
        while p < to {
            out.push(p);
            p = self.end[p] as usize;
        }
        out
    }

    fn discrete(&self, n: usize) -> bool {
        self.coord_cells == n
    }

    /// First smallest non-singleton coordinate cell.
    fn target(&self, n: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut p = 0;
        while p < n {
            let e = self.end[p] as usize;
            let len = e - p;
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((p, len));
            }
            p = e;
        }
        best
    }

    /// Splits the cell at `s` by `key`, pieces in ascending key order.
    fn split(
        &mut self,
        s: usize,
        key: impl Fn(u32) -> u32,
        n: usize,
        queue: &mut VecDeque<usize>,
        inq: &mut [bool],
        trace: &mut Trace<'_>,
    ) -> bool {
        let e = self.end[s] as usize;
        if e - s < 2 {
            return true;
        }
        let k0 = key(self.elems[s]);
        if self.elems[s + 1..e].iter().all(|&v| key(v) == k0) {
            return true;
        }
        let mut buf: Vec<(u32, u32)> = self.elems[s..e].iter().map(|&v| (key(v), v)).collect();
        buf.sort_unstable();
        let mut h = mix(0x5157, s as u64);
        let mut pieces: Vec<(usize, usize)> = Vec::new();
        let mut a = s;
        for (i, &(kv, v)) in buf.iter().enumerate() {
            self.elems[s + i] = v;
            if i + 1 == buf.len() || buf[i + 1].0 != kv {
                let b = s + i + 1;
                pieces.push((a, b));
                h = mix(h, ((kv as u64) << 32) | (b - a) as u64);
                a = b;
            }
        }
        for &(a, b) in &pieces {
            self.end[a] = b as u32;
            for &v in &self.elems[a..b] {
                self.cell[v as usize] = a as u32;
            }
        }
        if s < n {
            self.coord_cells += pieces.len() - 1;
        }
        if inq[s] {
            for &(a, _) in &pieces[1..] {
                inq[a] = true;
                queue.push_back(a);
            }
        } else {
            let largest = pieces
                .iter()
                .enumerate()
                .max_by(|(i, x), (j, y)| (x.1 - x.0).cmp(&(y.1 - y.0)).then(j.cmp(i)))
                .map(|(i, _)| i)
                .expect("at least two pieces");
            for (i, &(a, _)) in pieces.iter().enumerate() {
                if i != largest {
                    inq[a] = true;
                    queue.push_back(a);
                }
            }
        }
        trace.push(h)
    }

    fn refine(
        &mut self,
        st: &Structure,
        mut queue: VecDeque<usize>,
        scratch: &mut Scratch,
        trace: &mut Trace<'_>,
    ) -> bool {
        let n = st.n;
        let nv = st.vertices();
        for &s in &queue {
            scratch.inq[s] = true;
        }
        let mut ok = true;
        while let Some(s) = queue.pop_front() {
            scratch.inq[s] = false;
            if !ok {
                continue;
            }
            let e = self.end[s] as usize;
            if s < n {
                let mask = self.elems[s..e].iter().fold(0u64, |m, &c| m | bit(c as usize));
                for p in self.cell_starts(n, nv) {
                    let ok_split = self.split(
                        p,
                        |v| (st.words[v as usize - n] & mask).count_ones(),
                        n,
                        &mut queue,
                        &mut scratch.inq,
                        trace,
                    );
                    if !ok_split {
                        ok = false;
                        break;
                    }
                }
            } else {
                let counts = &mut scratch.counts;
                counts.iter_mut().for_each(|c| *c = 0);
                for &w in &self.elems[s..e] {
                    let mut x = st.words[w as usize - n];
                    while x != 0 {
                        let lz = x.leading_zeros() as usize;
                        x &= !bit(lz);
                        counts[lz] += 1;
                    }
                }
                let counts = counts.clone();
                for p in self.cell_starts(0, n) {
                    if !self.split(p, |v| counts[v as usize], n, &mut queue, &mut scratch.inq, trace) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        ok
    }

    fn individualize(&mut self, x: usize, n: usize) -> usize {
        let s = self.cell[x] as usize;
        let e = self.end[s] as usize;
        if e - s == 1 {
            return s;
        }
        let i = self.elems[s..e].iter().position(|&v| v as usize == x).expect("x in its cell") + s;
        self.elems.swap(s, i);
        self.end[s] = (s + 1) as u32;
        self.end[s + 1] = e as u32;
        for &v in &self.elems[s + 1..e] {
            self.cell[v as usize] = (s + 1) as u32;
        }
        self.cell[x] = s as u32;
        if s < n {
            self.coord_cells += 1;
        }
        s
    }
}

struct Scratch {
    inq: Vec<bool>,
    counts: Vec<u32>,
}

impl Scratch {
    fn new(st: &Structure) -> Self {
        Self {
            inq: vec![false; st.vertices() + 1],
            counts: vec![0; st.n],
        }
    }
}

/// The first path of a search tree: partitions, targets and traces per depth.
struct Path {
    /// Trace of the refinement producing each node.
    traces: Vec<Vec<u64>>,
    /// Target cell `(start, len)` at each internal node.
    targets: Vec<(usize, usize)>,
    parts: Vec<Partition>,
    /// Individualized coordinates along the path.
    base: Vec<usize>,
    /// Coordinates of the leaf in position order.
    leaf: Vec<u32>,
}

fn root(st: &Structure, scratch: &mut Scratch, reference: Option<&[u64]>) -> Option<(Partition, Vec<u64>)> {
    let mut p = Partition::initial(st);
    let queue: VecDeque<usize> = p.cell_starts(0, st.vertices()).into_iter().collect();
    let mut trace = Trace {
        events: Vec::new(),
        reference,
    };
    let n_classes = mix(st.n as u64, st.classes.len() as u64);
    if !trace.push(n_classes) {
        return None;
    }
    for &(wt, len) in &st.classes {
        if !trace.push(mix(wt as u64, len as u64)) {
            return None;
        }
    }
    let ok = p.refine(st, queue, scratch, &mut trace) && trace.complete();
    ok.then_some((p, trace.events))
}

fn first_path(st: &Structure, scratch: &mut Scratch) -> Path {
    let (mut part, trace) = root(st, scratch, None).expect("unconstrained refinement succeeds");
    let mut path = Path {
        traces: vec![trace],
        targets: Vec::new(),
        parts: Vec::new(),
        base: Vec::new(),
        leaf: Vec::new(),
    };
    while let Some((s, len)) = part.target(st.n) {
        let b = part.elems[s] as usize;
        path.targets.push((s, len));
        path.parts.push(part.clone());
        path.base.push(b);
        let s = part.individualize(b, st.n);
        let mut trace = Trace {
            events: Vec::new(),
            reference: None,
        };
        part.refine(st, VecDeque::from([s]), scratch, &mut trace);
        path.traces.push(trace.events);
    }
    path.leaf = part.elems[..st.n].to_vec();
    path
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Timeout,
}

struct Search<'a> {
    st: &'a Structure,
    reference: &'a Path,
    deadline: Option<Instant>,
    nodes: u64,
    scratch: Scratch,
}

impl Search<'_> {
    /// Depth-first search below `part` for a leaf accepted by `accept`,
    /// skipping children equivalent under `gens` fixing `prefix` pointwise.
    fn descend(
        &mut self,
        part: Partition,
        depth: usize,
        prefix: &mut Vec<usize>,
        gens: &[Permutation],
        accept: &mut dyn FnMut(&[u32]) -> Option<Permutation>,
    ) -> std::result::Result<Option<Permutation>, Stop> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(64) && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Stop::Timeout);
        }
        let n = self.st.n;
        if part.discrete(n) {
            if depth != self.reference.targets.len() {
                return Ok(None);
            }
            return Ok(accept(&part.elems[..n]));
        }
        let Some((s, len)) = part.target(n) else {
            return Ok(None);
        };
        if self.reference.targets.get(depth) != Some(&(s, len)) {
            return Ok(None);
        }
        let active: Vec<&Permutation> = gens
            .iter()
            .filter(|g| prefix.iter().all(|&b| g.apply(b) == b))
            .collect();
        let mut uf = UnionFind::new(n);
        for g in &active {
            uf.absorb(g);
        }
        let mut tried: Vec<usize> = Vec::new();
        let candidates: Vec<u32> = part.elems[s..s + len].to_vec();
        for x in candidates {
            let x = x as usize;
            let r = uf.find(x);
            if tried.contains(&r) {
                continue;
            }
            tried.push(r);
            let mut child = part.clone();
            let cs = child.individualize(x, n);
            let mut trace = Trace {
                events: Vec::new(),
                reference: Some(&self.reference.traces[depth + 1]),
            };
            if !child.refine(self.st, VecDeque::from([cs]), &mut self.scratch, &mut trace)
                || !trace.complete()
            {
                continue;
            }
            prefix.push(x);
            let found = self.descend(child, depth + 1, prefix, gens, accept);
            prefix.pop();
            if let Some(g) = found? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
            self.parent[small] = big;
            self.size[big] += self.size[small];
        }
    }

    fn absorb(&mut self, g: &Permutation) {
        for x in 0..self.parent.len() {
            self.union(x, g.apply(x));
        }
    }

    fn orbit_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

fn leaf_map(from: &[u32], to: &[u32]) -> Vec<u32> {
    let mut img = vec![0u32; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        img[a as usize] = b;
    }
    img
}

fn to_perm(img: Vec<u32>) -> Permutation {
    Permutation::from_images(img.into_iter().map(|x| x as usize).collect()).expect("leaf map is a bijection")
}

/// Exact permutation automorphism group with default options.
pub fn paut(c: &LinearCode) -> Result<PermGroup> {
    Ok(paut_with(c, &PautOptions::default())?.group)
}

pub fn paut_with(c: &LinearCode, opts: &PautOptions) -> Result<PautResult> {
    let start = Instant::now();
    let st = Structure::new(c, opts.words)?;
    let n = st.n;
    let mut scratch = Scratch::new(&st);
    let path = first_path(&st, &mut scratch);
    let mut search = Search {
        st: &st,
        reference: &path,
        deadline: opts.timeout.map(|t| start + t),
        nodes: path.targets.len() as u64 + 1,
        scratch,
    };
    let mut gens: Vec<Permutation> = Vec::new();
    let mut exact = true;
    'levels: for i in (0..path.targets.len()).rev() {
        let (s, len) = path.targets[i];
        let part = &path.parts[i];
        let prefix: Vec<usize> = path.base[..i].to_vec();
        let b = path.base[i];
        let mut failed: Vec<usize> = Vec::new();
        let candidates: Vec<usize> = part.elems[s..s + len].iter().map(|&x| x as usize).collect();
        for &x in &candidates {
            if x == b {
                continue;
            }
            let mut uf = UnionFind::new(n);
            for g in gens.iter().filter(|g| prefix.iter().all(|&p| g.apply(p) == p)) {
                uf.absorb(g);
            }
            let rx = uf.find(x);
            if rx == uf.find(b) || failed.iter().any(|&f| uf.find(f) == rx) {
                continue;
            }
            let mut child = part.clone();
            let cs = child.individualize(x, n);
            let mut trace = Trace {
                events: Vec::new(),
                reference: Some(&path.traces[i + 1]),
            };
            let mut found = None;
            if child.refine(&st, VecDeque::from([cs]), &mut search.scratch, &mut trace) && trace.complete() {
                let mut pre = prefix.clone();
                pre.push(x);
                let first = &path.leaf;
                let stref = &st;
                let mut accept = |leaf: &[u32]| {
                    let img = leaf_map(first, leaf);
                    stref.maps_into(&img, stref).then(|| to_perm(img))
                };
                match search.descend(child, i + 1, &mut pre, &gens, &mut accept) {
                    Ok(f) => found = f,
                    Err(Stop::Timeout) => {
                        exact = false;
                        break 'levels;
                    }
                }
            }
            match found {
                Some(g) => gens.push(g),
                None => failed.push(x),
            }
        }
    }
    let group = PermGroup::from_generators(n, gens.iter().cloned())?;
    if exact {
        let mut expected = BigUint::from(1u32);
        for i in 0..path.base.len() {
            let mut uf = UnionFind::new(n);
            for g in gens.iter().filter(|g| path.base[..i].iter().all(|&p| g.apply(p) == p)) {
                uf.absorb(g);
            }
            expected *= BigUint::from(uf.orbit_size(path.base[i]));
        }
        if expected != group.order() {
            return Err(Error::Structure(format!(
                "search orbit product {expected} disagrees with stabilizer chain order {}",
                group.order()
            )));
        }
    }
    Ok(PautResult {
        group,
        exact,
        elapsed: start.elapsed(),
        nodes: search.nodes,
        base: path.base.clone(),
        strong: gens,
    })
}

/// Exhaustive oracle over all `n!` permutations.
pub fn paut_brute(c: &LinearCode) -> Result<PermGroup> {
    let n = c.len();
    if n > MAX_BRUTE_LENGTH {
        return Err(Error::guard("brute-force length", n as u64, MAX_BRUTE_LENGTH as u64));
    }
    let st = Structure::new(c, WordSet::WeightCap(0))?;
    let mut g = PermGroup::trivial(n);
    let mut img: Vec<u32> = (0..n as u32).collect();
    // Heap's algorithm.
    let mut counters = vec![0usize; n];
    let check = |img: &[u32], g: &mut PermGroup| {
        if st.maps_into(img, &st) {
            let p = to_perm(img.to_vec());
            if !g.contains(&p) {
                g.add_generator(p);
            }
        }
    };
    check(&img, &mut g);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                img.swap(0, i);
            } else {
                img.swap(counters[i], i);
            }
            check(&img, &mut g);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(g)
}

/// Outcome of an equivalence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `c1^p = c2`.
    Equivalent(Permutation),
    NotEquivalent,
    /// The search hit its deadline.
    Unknown,
}

/// Returns `p` with `c1^p = c2`, or `None` when no permutation exists.
pub fn are_equivalent(c1: &LinearCode, c2: &LinearCode) -> Result<Option<Permutation>> {
    match are_equivalent_with(c1, c2, None, &PautOptions::default())? {
        Equivalence::Equivalent(p) => Ok(Some(p)),
        Equivalence::NotEquivalent => Ok(None),
        Equivalence::Unknown => Err(Error::Structure("equivalence search timed out".into())),
    }
}

/// Equivalence test searching `c1`'s tree against the first leaf of `c2`.
/// `aut1`, when given, must come from `paut_with(c1, opts)` with the same
/// word set; its strong generators prune the search.
pub fn are_equivalent_with(
    c1: &LinearCode,
    c2: &LinearCode,
    aut1: Option<&PautResult>,
    opts: &PautOptions,
) -> Result<Equivalence> {
    if c1.len() != c2.len() || c1.dim() != c2.dim() {
        return Ok(Equivalence::NotEquivalent);
    }
    let start = Instant::now();
    let s1 = Structure::new(c1, opts.words)?;
    let s2 = Structure::new(c2, opts.words)?;
    if s1.classes != s2.classes {
        return Ok(Equivalence::NotEquivalent);
    }
    let n = s1.n;
    let mut scratch2 = Scratch::new(&s2);
    let reference = first_path(&s2, &mut scratch2);
    let mut scratch = Scratch::new(&s1);
    let Some((part, _)) = root(&s1, &mut scratch, Some(&reference.traces[0])) else {
        return Ok(Equivalence::NotEquivalent);
    };
    let gens: Vec<Permutation> = aut1.map(|a| a.strong.clone()).unwrap_or_default();
    let mut search = Search {
        st: &s1,
        reference: &reference,
        deadline: opts.timeout.map(|t| start + t),
        nodes: 0,
        scratch,
    };
    let target_leaf = reference.leaf.clone();
    let (s1r, s2r) = (&s1, &s2);
    let mut accept = |leaf: &[u32]| {
        let img = leaf_map(leaf, &target_leaf);
        s1r.maps_into(&img, s2r).then(|| to_perm(img))
    };
    match search.descend(part, 0, &mut Vec::with_capacity(n), &gens, &mut accept) {
        Ok(Some(p)) => Ok(Equivalence::Equivalent(p)),
        Ok(None) => Ok(Equivalence::NotEquivalent),
        Err(Stop::Timeout) => Ok(Equivalence::Unknown),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::SigmaAction;

    fn order(c: &LinearCode) -> u64 {
        paut(c).unwrap().order_u64().unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&LinearCode::from_strs(&["111"])), 6);
        assert_eq!(order(&LinearCode::from_strs(&["111000"])), 36);
        assert_eq!(order(&LinearCode::from_strs(&["111000", "101101", "110110"])), 24);
        assert_eq!(order(&LinearCode::zero(5)), 120);
        assert_eq!(order(&LinearCode::from_strs(&["11111"])), 120);
    }

    #[test]
    fn brute_agrees_on_small_cases() {
        for rows in [
            vec!["111"],
            vec!["111000"],
            vec!["111000", "101101", "110110"],
            vec!["1100", "0011"],
            vec!["1110000", "0111000", "0011100", "0001110"],
        ] {
            let c = LinearCode::from_strs(&rows);
            assert_eq!(paut_brute(&c).unwrap().order(), paut(&c).unwrap().order(), "{rows:?}");
        }
        assert!(paut_brute(&LinearCode::zero(9)).is_err());
    }

    #[test]
    fn hamming_code() {
        let c = LinearCode::from_strs(&["1000110", "0100011", "0010111", "0001101"]);
        assert_eq!(order(&c), 168);
        let ext = LinearCode::from_strs(&["10001101", "01000111", "00101110", "00011011"]);
        assert_eq!(order(&ext), 1344);
    }

    #[test]
    fn sigma_is_an_automorphism() {
        let c = LinearCode::from_strs(&[
            "110 000 101 011 000 000",
            "000 101 110 000 000 101",
            "011 000 110 101 000 000",
            "000 110 011 000 000 110",
        ]);
        let g = paut(&c).unwrap();
        assert!(g.contains(&SigmaAction::new(6).permutation()));
    }

    #[test]
    fn equivalence_witness() {
        let c = LinearCode::from_strs(&["1000110", "0100011", "0010111", "0001101"]);
        let p = Permutation::parse(7, "(1,5,2)(3,7)").unwrap();
        let d = p.apply_code(&c).unwrap();
        let w = are_equivalent(&c, &d).unwrap().unwrap();
        assert_eq!(w.apply_code(&c).unwrap(), d);
        let a = LinearCode::from_strs(&["110000"]);
        let b = LinearCode::from_strs(&["111000"]);
        assert_eq!(are_equivalent(&a, &b).unwrap(), None);
    }

    #[test]
    fn signatures_are_covariant() {
        let c = LinearCode::from_strs(&["1100", "0111"]);
        let s = coordinate_signatures(&c, 4).unwrap();
        assert_eq!(s[0].0, vec![0, 0, 1, 1, 0]);
        let p = Permutation::parse(4, "(1,4)").unwrap();
        let d = p.apply_code(&c).unwrap();
        let t = coordinate_signatures(&d, 4).unwrap();
        assert_eq!(t[3], s[0]);
    }
}
