//! Bit-packed vectors and matrices over the two-element field, and binary
//! linear codes kept in reduced row-echelon form.
//!
//! Coordinates are 0-based internally. Coordinate `i` lives in word `i / 64`
//! at bit `63 - i % 64`, so comparing the word vectors as integers is the
//! same as comparing the words lexicographically with coordinate 1 first.

use std::fmt;

use crate::error::{Error, Result};

/// Enumeration-based routines refuse codes above this dimension.
pub const MAX_ENUM_DIM: usize = 28;

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i & 63))
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    len: usize,
    words: Vec<u64>,
}

impl Codeword {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a word from a 1-based support.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in support {
            v.set(p - 1, true);
        }
        v
    }

    /// Parses `0`/`1` characters; whitespace and `|` separators are skipped.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for (col, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '|' => {}
                c => {
                    return Err(Error::Parse {
                        line: 1,
                        column: col + 1,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i >> 6] |= mask(i);
        } else {
            self.words[i >> 6] &= !mask(i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= mask(i);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Position of the first set coordinate.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.leading_zeros() as usize)
    }

    /// 0-based positions of the ones.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Codeword) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Codeword) -> Codeword {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &Codeword) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Single-word view for words of length at most 64.
    pub(crate) fn as_u64(&self) -> u64 {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub(crate) fn from_u64(len: usize, word: u64) -> Self {
        debug_assert!(len <= 64);
        let mut v = Self::zeros(len);
        if let Some(w) = v.words.first_mut() {
            *w = word;
        }
        v
    }

    /// Bits of coordinates `start..start + len` as a small integer, first coordinate most significant.
    pub fn chunk(&self, start: usize, len: usize) -> u8 {
        let mut out = 0u8;
        for i in start..start + len {
            out = (out << 1) | self.get(i) as u8;
        }
        out
    }

    /// Renders the word with a space after every `group` coordinates.
    pub fn grouped(&self, group: usize) -> String {
        let mut s = String::with_capacity(self.len + self.len / group.max(1));
        for i in 0..self.len {
            if i > 0 && group > 0 && i % group == 0 {
                s.push(' ');
            }
            s.push(if self.get(i) { '1' } else { '0' });
        }
        s
    }

    pub fn to_hex(&self) -> String {
        self.words
            .iter()
            .map(|w| format!("{w:016x}"))
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.grouped(0))
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword({})", self.grouped(3))
    }
}

/// Row-major binary matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gf2Matrix {
    rows: Vec<Codeword>,
    cols: usize,
}

/// Output of [`Gf2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Gf2Matrix,
    pub rank: usize,
    /// Strictly increasing pivot columns, one per nonzero row.
    pub pivots: Vec<usize>,
}

impl Gf2Matrix {
    pub fn new(cols: usize, rows: Vec<Codeword>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(Self { rows, cols })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![Codeword::zeros(cols); rows],
            cols,
        }
    }

    /// Convenience constructor from `0`/`1` strings; panics on malformed input.
    pub fn from_strs(rows: &[&str]) -> Self {
        let rows: Vec<Codeword> = rows
            .iter()
            .map(|r| Codeword::parse(r).expect("binary row"))
            .collect();
        let cols = rows.first().map_or(0, Codeword::len);
        Self::new(cols, rows).expect("rows of equal length")
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Codeword] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Codeword {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<Codeword> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Rref {
            matrix: Gf2Matrix {
                rows,
                cols: self.cols,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(&r.grouped(if self.cols.is_multiple_of(3) { 3 } else { 0 }))?;
        }
        Ok(())
    }
}

/// A binary linear code. The generator is stored in reduced row-echelon form
/// without zero rows, so equality and hashing are representation independent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearCode {
    n: usize,
    generator: Gf2Matrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// Row space of the given words.
    pub fn from_rows(n: usize, rows: Vec<Codeword>) -> Result<Self> {
        let m = Gf2Matrix::new(n, rows)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_matrix(m: &Gf2Matrix) -> Self {
        let Rref {
            matrix,
            rank,
            pivots,
        } = m.rref();
        let mut rows = matrix.rows;
        rows.truncate(rank);
        Self {
            n: m.cols,
            generator: Gf2Matrix { rows, cols: m.cols },
            pivots,
        }
    }

    pub fn from_strs(rows: &[&str]) -> Self {
        Self::from_matrix(&Gf2Matrix::from_strs(rows))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            generator: Gf2Matrix {
                rows: Vec::new(),
                cols: n,
            },
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the generator; zero iff `v` is a codeword.
    pub fn reduce(&self, v: &Codeword) -> Codeword {
        let mut r = v.clone();
        for (row, &p) in self.generator.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &Codeword) -> bool {
        v.len() == self.n && self.reduce(v).is_zero()
    }

    /// `self` is a subspace of `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.generator.rows.iter().all(|r| other.contains(r))
    }

    fn check_enum(&self) -> Result<()> {
        if self.dim() > MAX_ENUM_DIM {
            return Err(Error::guard("code dimension", self.dim() as u64, MAX_ENUM_DIM as u64));
        }
        Ok(())
    }

    /// All `2^k` codewords in Gray-code order.
    pub fn span_enumerate(&self) -> Result<SpanIter<'_>> {
        self.check_enum()?;
        Ok(SpanIter {
            gens: &self.generator.rows,
            current: Codeword::zeros(self.n),
            step: 0,
            total: 1u64 << self.dim(),
        })
    }

    /// Visits every codeword without allocating.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&Codeword)) -> Result<()> {
        self.check_enum()?;
        let mut cur = Codeword::zeros(self.n);
        f(&cur);
        for i in 1u64..(1u64 << self.dim()) {
            cur.xor_assign(&self.generator.rows[i.trailing_zeros() as usize]);
            f(&cur);
        }
        Ok(())
    }

    pub fn codewords(&self) -> Result<Vec<Codeword>> {
        Ok(self.span_enumerate()?.collect())
    }

    /// `W[i]` = number of codewords of weight `i`.
    pub fn weight_enumerator(&self) -> Result<Vec<u64>> {
        let mut w = vec![0u64; self.n + 1];
        self.for_each_codeword(|c| w[c.weight()] += 1)?;
        Ok(w)
    }

    pub fn dual(&self) -> LinearCode {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.n)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut w = Codeword::zeros(self.n);
                w.set(j, true);
                for (row, &p) in self.generator.rows.iter().zip(&self.pivots) {
                    if row.get(j) {
                        w.set(p, true);
                    }
                }
                w
            })
            .collect();
        LinearCode::from_rows(self.n, rows).expect("dual rows have code length")
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let rows = &self.generator.rows;
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i..].iter().all(|b| !a.dot(b)))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.n && self.is_self_orthogonal()
    }

    /// Row space of the union of both generators.
    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let rows = self
            .generator
            .rows
            .iter()
            .chain(&other.generator.rows)
            .cloned()
            .collect();
        LinearCode::from_rows(self.n, rows)
    }

    /// Short stable identifier derived from the canonical generator.
    pub fn fingerprint_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for r in &self.generator.rows {
            for w in r.words() {
                h.update(w.to_be_bytes());
            }
        }
        hex::encode(&h.finalize()[..8])
    }
}

/// Iterator over a code's span; see [`LinearCode::span_enumerate`].
pub struct SpanIter<'a> {
    gens: &'a [Codeword],
    current: Codeword,
    step: u64,
    total: u64,
}

impl Iterator for SpanIter<'_> {
    type Item = Codeword;

    fn next(&mut self) -> Option<Codeword> {
        if self.step >= self.total {
            return None;
        }
        if self.step > 0 {
            self.current
                .xor_assign(&self.gens[self.step.trailing_zeros() as usize]);
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.step) as usize;
        (left, Some(left))
    }
}

/// Generator rows as written in a code file, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub n: usize,
    pub rows: Gf2Matrix,
}

impl CodeFile {
    pub fn code(&self) -> LinearCode {
        LinearCode::from_matrix(&self.rows)
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the shared text format: a header line `n k`, then `k` rows of `n`
/// binary digits. Whitespace, `|` and `.` separators are ignored, and `#`
/// starts a comment.
pub fn parse_code_file(text: &str) -> Result<CodeFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        match header {
            None => {
                let mut it = content.split_whitespace();
                let mut num = |what: &str| -> Result<usize> {
                    let tok = it
                        .next()
                        .ok_or_else(|| parse_err(line_no, 1, format!("missing {what} in header")))?;
                    tok.parse::<usize>().map_err(|_| {
                        let col = content.find(tok).unwrap_or(0) + 1;
                        parse_err(line_no, col, format!("invalid {what} {tok:?}"))
                    })
                };
                let n = num("length")?;
                let k = num("row count")?;
                if let Some(extra) = it.next() {
                    let col = content.find(extra).unwrap_or(0) + 1;
                    return Err(parse_err(line_no, col, "unexpected token after `n k`"));
                }
                header = Some((n, k));
            }
            Some((n, k)) => {
                if rows.len() == k {
                    return Err(parse_err(line_no, 1, format!("more than {k} rows")));
                }
                let mut bits = Vec::with_capacity(n);
                for (col, ch) in content.chars().enumerate() {
                    match ch {
                        '0' => bits.push(false),
                        '1' => bits.push(true),
                        c if c.is_whitespace() || c == '|' || c == '.' => {}
                        c => {
                            return Err(parse_err(
                                line_no,
                                col + 1,
                                format!("unexpected character {c:?}"),
                            ))
                        }
                    }
                }
                if bits.len() != n {
                    return Err(parse_err(
                        line_no,
                        1,
                        format!("row has {} coordinates, expected {n}", bits.len()),
                    ));
                }
                rows.push(Codeword::from_bits(&bits));
            }
        }
    }
    let (n, k) = header.ok_or_else(|| parse_err(1, 1, "missing `n k` header"))?;
    if rows.len() != k {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!("expected {k} rows, found {}", rows.len()),
        ));
    }
    Ok(CodeFile {
        n,
        rows: Gf2Matrix::new(n, rows)?,
    })
}

/// Writes the generator of `code` in the shared text format.
pub fn format_code_file(code: &LinearCode) -> String {
    let group = if code.len().is_multiple_of(3) { 3 } else { 0 };
    let mut s = format!("{} {}\n", code.len(), code.dim());
    for r in code.generator().rows() {
        s.push_str(&r.grouped(group));
        s.push('\n');
    }
    s
}
