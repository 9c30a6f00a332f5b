//! The `[E | M]` generator form of an even-block code: `E = diag(E1, ..., E1)`
//! on the first `k` blocks and `M` a grid over `{E0, E1, E2, E3}`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{Codeword, Gf2Matrix, LinearCode};
use crate::permgroup::Permutation;
use crate::sigma::{huffman_decompose, is_sigma_invariant, sigma_pair_basis, SigmaAction};

/// A 2x3 block of a row pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EBlock {
    E0,
    E1,
    E2,
    E3,
}

impl EBlock {
    pub const NONZERO: [EBlock; 3] = [EBlock::E1, EBlock::E2, EBlock::E3];

    /// Rows as 3-bit values, first coordinate most significant.
    pub fn rows(self) -> [u8; 2] {
        match self {
            EBlock::E0 => [0b000, 0b000],
            EBlock::E1 => [0b101, 0b011],
            EBlock::E2 => [0b110, 0b101],
            EBlock::E3 => [0b011, 0b110],
        }
    }

    pub fn from_rows(rows: [u8; 2]) -> Option<EBlock> {
        [EBlock::E0, EBlock::E1, EBlock::E2, EBlock::E3]
            .into_iter()
            .find(|t| t.rows() == rows)
    }

    /// In-block offsets `(a, b)` of the transposition exchanging the two rows.
    pub fn row_swap(self) -> (usize, usize) {
        match self {
            EBlock::E0 | EBlock::E1 => (0, 1),
            EBlock::E2 => (1, 2),
            EBlock::E3 => (0, 2),
        }
    }
}

impl fmt::Display for EBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EBlock::E0 => ".",
            EBlock::E1 => "E1",
            EBlock::E2 => "E2",
            EBlock::E3 => "E3",
        };
        f.write_str(s)
    }
}

/// Canonical form of an even-block code of dimension `2k` on `m` blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalEM {
    k: usize,
    m: usize,
    /// `grid[r][c]`: row pair `r`, M-column `c`.
    grid: Vec<Vec<EBlock>>,
    /// Product of whole-block swaps taking the input coordinates to the form.
    gamma: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum HypothesisClass {
    /// Every M-column has all its nonzero tags equal.
    A,
    /// M-column `column` has distinct nonzero tags in row pairs `r` and `s` (1-based).
    B { column: usize, r: usize, s: usize },
}

impl CanonicalEM {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid(&self) -> &[Vec<EBlock>] {
        &self.grid
    }

    pub fn gamma(&self) -> &Permutation {
        &self.gamma
    }

    /// Builds a form from its grid; `gamma` is the identity.
    pub fn from_grid(k: usize, grid: Vec<Vec<EBlock>>) -> Result<Self> {
        if grid.len() != k {
            return Err(Error::Structure(format!("grid has {} rows, expected {k}", grid.len())));
        }
        let width = grid.first().map_or(0, Vec::len);
        if grid.iter().any(|r| r.len() != width) {
            return Err(Error::Structure("grid rows have different lengths".into()));
        }
        let m = k + width;
        Ok(Self {
            k,
            m,
            grid,
            gamma: Permutation::identity(3 * m),
        })
    }

    /// Reads a `2k x 3m` matrix already in `[E | M]` form.
    pub fn from_matrix(g: &Gf2Matrix) -> Result<Self> {
        if g.nrows() % 2 == 1 {
            return Err(Error::OddDimension(g.nrows()));
        }
        if !g.ncols().is_multiple_of(3) {
            return Err(Error::LengthNotMultipleOfThree(g.ncols()));
        }
        let (k, m) = (g.nrows() / 2, g.ncols() / 3);
        if m < k {
            return Err(Error::Structure(format!("{k} row pairs need at least {k} blocks")));
        }
        let tags = read_tags(g, k, m)?;
        for (r, row) in tags.iter().enumerate() {
            for (c, &t) in row[..k].iter().enumerate() {
                let expected = if r == c { EBlock::E1 } else { EBlock::E0 };
                if t != expected {
                    return Err(Error::Structure(format!(
                        "row pair {} has {t} at block {}, expected {expected}",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        let grid = tags.into_iter().map(|row| row[k..].to_vec()).collect();
        Self::from_grid(k, grid)
    }

    /// The `2k x 3m` matrix `[E | M]`.
    pub fn matrix(&self) -> Gf2Matrix {
        let n = 3 * self.m;
        let mut rows = vec![Codeword::zeros(n); 2 * self.k];
        for r in 0..self.k {
            for b in 0..self.m {
                let tag = if b < self.k {
                    if b == r {
                        EBlock::E1
                    } else {
                        EBlock::E0
                    }
                } else {
                    self.grid[r][b - self.k]
                };
                for (h, bits) in tag.rows().into_iter().enumerate() {
                    for j in 0..3 {
                        if bits & (4 >> j) != 0 {
                            rows[2 * r + h].set(3 * b + j, true);
                        }
                    }
                }
            }
        }
        Gf2Matrix::new(n, rows).expect("rows have length 3m")
    }

    /// The code spanned by `[E | M]`, in canonical coordinates.
    pub fn code(&self) -> LinearCode {
        LinearCode::from_matrix(&self.matrix())
    }

    /// The code in the input coordinates: `[E | M]` with `gamma` undone.
    pub fn original_code(&self) -> LinearCode {
        self.gamma
            .inverse()
            .apply_code(&self.code())
            .expect("degree 3m")
    }

    pub fn hypothesis_class(&self) -> HypothesisClass {
        for c in 0..self.m - self.k {
            let mut first: Option<(usize, EBlock)> = None;
            for r in 0..self.k {
                let t = self.grid[r][c];
                if t == EBlock::E0 {
                    continue;
                }
                match first {
                    None => first = Some((r, t)),
                    Some((r0, t0)) if t0 != t => {
                        return HypothesisClass::B {
                            column: c + 1,
                            r: r0 + 1,
                            s: r + 1,
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        HypothesisClass::A
    }

    /// `alpha * beta` in canonical coordinates: `alpha` swaps the first two
    /// coordinates of each E-block, `beta` swaps the rows of the common tag of
    /// each M-column (first two coordinates for zero columns). It fixes every
    /// blockwise-constant word.
    pub fn involution_hypothesis_a(&self) -> Result<Permutation> {
        if let HypothesisClass::B { column, r, s } = self.hypothesis_class() {
            return Err(Error::Structure(format!(
                "M-column {column} has distinct tags in row pairs {r} and {s}"
            )));
        }
        let mut pairs: Vec<(usize, usize)> = (0..self.k).map(|i| (3 * i, 3 * i + 1)).collect();
        for c in 0..self.m - self.k {
            let tag = (0..self.k)
                .map(|r| self.grid[r][c])
                .find(|&t| t != EBlock::E0)
                .unwrap_or(EBlock::E0);
            let (a, b) = tag.row_swap();
            let base = 3 * (self.k + c);
            pairs.push((base + a, base + b));
        }
        Permutation::from_transpositions(3 * self.m, &pairs)
    }

    /// Conjugates a permutation of canonical coordinates back to input coordinates.
    pub fn to_original(&self, g: &Permutation) -> Permutation {
        self.gamma.then(g).then(&self.gamma.inverse())
    }

    /// Renders the tag grid, one row pair per line: `E1 . | E2 .`.
    pub fn render_grid(&self) -> String {
        let mut out = String::new();
        for r in 0..self.k {
            let e: Vec<String> = (0..self.k)
                .map(|c| if c == r { "E1".into() } else { ".".into() })
                .collect();
            let mcol: Vec<String> = self.grid[r].iter().map(ToString::to_string).collect();
            out.push_str(&e.join(" "));
            if !mcol.is_empty() {
                out.push_str(" | ");
                out.push_str(&mcol.join(" "));
            }
            out.push('\n');
        }
        out
    }
}

fn read_tags(g: &Gf2Matrix, k: usize, m: usize) -> Result<Vec<Vec<EBlock>>> {
    let mut tags = vec![vec![EBlock::E0; m]; k];
    for (r, row) in tags.iter_mut().enumerate() {
        for (b, t) in row.iter_mut().enumerate() {
            let bits = [g.row(2 * r).chunk(3 * b, 3), g.row(2 * r + 1).chunk(3 * b, 3)];
            *t = EBlock::from_rows(bits).ok_or_else(|| {
                Error::Structure(format!(
                    "row pair {} block {} reads {:03b}/{:03b}, not in E0..E3",
                    r + 1,
                    b + 1,
                    bits[0],
                    bits[1]
                ))
            })?;
        }
    }
    Ok(tags)
}

fn swap_blocks(rows: &mut [Codeword], a: usize, b: usize) {
    for r in rows.iter_mut() {
        for j in 0..3 {
            let (x, y) = (r.get(3 * a + j), r.get(3 * b + j));
            r.set(3 * a + j, y);
            r.set(3 * b + j, x);
        }
    }
}

/// Puts σ-closed row pairs `(v1, v1^s, v2, v2^s, ...)` into `[E | M]` form.
/// When pair `j` vanishes on block `j`, block `j` is swapped with the
/// rightmost later block where the pair is nonzero.
pub fn canonical_em_form_from_pairs(pairs: &[Codeword], action: SigmaAction) -> Result<CanonicalEM> {
    if pairs.len() % 2 == 1 {
        return Err(Error::OddDimension(pairs.len()));
    }
    let (n, m, k) = (action.length(), action.blocks(), pairs.len() / 2);
    let mut rows = pairs.to_vec();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: r.len(),
            });
        }
        action.check_even_blocks(r)?;
        if i % 2 == 1 && action.apply_unchecked(&rows[i - 1], 1) != *r {
            return Err(Error::Structure(format!("row {} is not the image of row {i}", i + 1)));
        }
    }
    if LinearCode::from_rows(n, rows.clone())?.dim() != 2 * k {
        return Err(Error::Structure("row pairs are linearly dependent".into()));
    }
    let mut gamma = Permutation::identity(n);
    for j in 0..k {
        let nonzero = |rows: &[Codeword], b: usize| {
            action.block_bits(&rows[2 * j], b) != 0 || action.block_bits(&rows[2 * j + 1], b) != 0
        };
        if !nonzero(&rows, j) {
            let p = (j + 1..m)
                .rev()
                .find(|&b| nonzero(&rows, b))
                .ok_or_else(|| Error::Structure(format!("row pair {} vanishes", j + 1)))?;
            swap_blocks(&mut rows, j, p);
            let swap = Permutation::from_transpositions(
                n,
                &[(3 * j, 3 * p), (3 * j + 1, 3 * p + 1), (3 * j + 2, 3 * p + 2)],
            )?;
            gamma = gamma.then(&swap);
        }
        normalize_pivot(&mut rows, j, action)?;
        let (p0, p1) = (rows[2 * j].clone(), rows[2 * j + 1].clone());
        for i in (0..2 * k).filter(|&i| i / 2 != j) {
            let bits = action.block_bits(&rows[i], j);
            // E1 rows are 101 and 011: the first two coordinates select them.
            if bits & 0b100 != 0 {
                rows[i].xor_assign(&p0);
            }
            if bits & 0b010 != 0 {
                rows[i].xor_assign(&p1);
            }
            debug_assert_eq!(action.block_bits(&rows[i], j), 0);
        }
    }
    let g = Gf2Matrix::new(n, rows)?;
    debug_assert_eq!(g.rref().matrix, g);
    let tags = read_tags(&g, k, m)?;
    let grid = tags.into_iter().map(|row| row[k..].to_vec()).collect();
    Ok(CanonicalEM { k, m, grid, gamma })
}

/// Replaces rows `2j, 2j+1` by combinations reading `E1` on block `j`.
fn normalize_pivot(rows: &mut [Codeword], j: usize, action: SigmaAction) -> Result<()> {
    let (a, b) = (rows[2 * j].clone(), rows[2 * j + 1].clone());
    let ab = a.xor(&b);
    let candidates = [&a, &b, &ab];
    let pick = |target: u8| {
        candidates
            .iter()
            .find(|c| action.block_bits(c, j) == target)
            .map(|c| (*c).clone())
    };
    let [t0, t1] = EBlock::E1.rows();
    match (pick(t0), pick(t1)) {
        (Some(x), Some(y)) => {
            rows[2 * j] = x;
            rows[2 * j + 1] = y;
            Ok(())
        }
        _ => Err(Error::Structure(format!(
            "row pair {} does not span the even words on block {}",
            j + 1,
            j + 1
        ))),
    }
}

/// Canonical form of the even-block part of a sigma-invariant code, from
/// its greedy pair basis.
pub fn canonical_em_form(c: &LinearCode) -> Result<CanonicalEM> {
    let action = SigmaAction::for_length(c.len())?;
    if !is_sigma_invariant(c)? {
        return Err(Error::NotSigmaInvariant);
    }
    let e = huffman_decompose(c)?.even;
    let basis = sigma_pair_basis(&e)?;
    let k = basis.len() / 2;
    let pairs: Vec<Codeword> = (0..k)
        .flat_map(|i| [basis[i].clone(), basis[k + i].clone()])
        .collect();
    canonical_em_form_from_pairs(&pairs, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::involutions::verify_automorphism;

    fn cw(s: &str) -> Codeword {
        Codeword::parse(s).unwrap()
    }

    #[test]
    fn tags_and_row_swaps() {
        for t in EBlock::NONZERO {
            let [r0, r1] = t.rows();
            assert_eq!(r0.count_ones(), 2);
            assert_eq!(r1.count_ones(), 2);
            assert_ne!(r0, r1);
            let (a, b) = t.row_swap();
            let swap = |x: u8| {
                let bit = |x: u8, i: usize| (x >> (2 - i)) & 1;
                let mut y = x & !((4 >> a) | (4 >> b));
                y |= bit(x, a) << (2 - b);
                y |= bit(x, b) << (2 - a);
                y
            };
            assert_eq!(swap(r0), r1);
            assert_eq!(swap(r1), r0);
        }
    }

    #[test]
    fn worked_reduction() {
        let a = SigmaAction::new(5);
        let pairs = [
            cw("000 110 101 000 101"),
            cw("000 011 110 000 110"),
            cw("000 101 101 101 011"),
            cw("000 110 110 110 101"),
        ];
        let f = canonical_em_form_from_pairs(&pairs, a).unwrap();
        assert_eq!(
            f.gamma().to_string(),
            "(1,13)(2,14)(3,15)(4,10)(5,11)(6,12)"
        );
        let expected = Gf2Matrix::from_strs(&[
            "101 000 101 110 000",
            "011 000 011 101 000",
            "000 101 110 000 000",
            "000 011 101 000 000",
        ]);
        assert_eq!(f.matrix(), expected);
        let input = LinearCode::from_rows(15, pairs.to_vec()).unwrap();
        assert_eq!(f.original_code(), input);
        assert_eq!(f.gamma().apply_code(&input).unwrap(), f.code());
    }

    #[test]
    fn identity_on_canonical_input() {
        let a = SigmaAction::new(2);
        let pairs = [cw("110 000"), cw("011 000"), cw("000 110"), cw("000 011")];
        let f = canonical_em_form_from_pairs(&pairs, a).unwrap();
        assert!(f.gamma().is_identity());
        assert!(f.grid().iter().all(Vec::is_empty));
        assert_eq!(f.hypothesis_class(), HypothesisClass::A);
        assert_eq!(f.involution_hypothesis_a().unwrap().to_string(), "(1,2)(4,5)");
    }

    #[test]
    fn grid_classes() {
        use EBlock::*;
        let m = vec![
            vec![E1, E0, E0, E0],
            vec![E0, E0, E0, E2],
            vec![E0, E3, E0, E0],
            vec![E0, E0, E1, E0],
        ];
        let m1 = vec![
            vec![E1, E0, E0, E0],
            vec![E0, E0, E0, E2],
            vec![E0, E3, E0, E2],
            vec![E0, E3, E2, E0],
        ];
        let m2 = vec![
            vec![E1, E3, E1, E0],
            vec![E2, E0, E0, E2],
            vec![E0, E2, E1, E3],
            vec![E0, E0, E1, E0],
        ];
        assert_eq!(CanonicalEM::from_grid(4, m).unwrap().hypothesis_class(), HypothesisClass::A);
        assert_eq!(CanonicalEM::from_grid(4, m1).unwrap().hypothesis_class(), HypothesisClass::A);
        assert_eq!(
            CanonicalEM::from_grid(4, m2).unwrap().hypothesis_class(),
            HypothesisClass::B { column: 1, r: 1, s: 2 }
        );
    }

    #[test]
    fn expanded_examples_give_printed_involutions() {
        let first = Gf2Matrix::from_strs(&[
            "101 000 000 000 000 101 000",
            "011 000 000 000 000 011 000",
            "000 101 000 000 011 000 000",
            "000 011 000 000 110 000 000",
            "000 000 101 000 000 000 110",
            "000 000 011 000 000 000 101",
            "000 000 000 101 000 000 000",
            "000 000 000 011 000 000 000",
        ]);
        let f = CanonicalEM::from_matrix(&first).unwrap();
        let p = f.involution_hypothesis_a().unwrap();
        assert_eq!(p.to_string(), "(1,2)(4,5)(7,8)(10,11)(13,15)(16,17)(20,21)");
        assert!(verify_automorphism(&f.code(), &p).unwrap());
        let with_fixed = f.code().sum(&LinearCode::from_strs(&["111 000 111 000 111 111 000"])).unwrap();
        assert!(verify_automorphism(&with_fixed, &p).unwrap());

        let second = Gf2Matrix::from_strs(&[
            "101 000 000 000 000 011 000",
            "011 000 000 000 000 110 000",
            "000 101 000 000 110 000 101",
            "000 011 000 000 101 000 011",
            "000 000 101 000 000 011 101",
            "000 000 011 000 000 110 011",
            "000 000 000 101 000 000 101",
            "000 000 000 011 000 000 011",
        ]);
        let f = CanonicalEM::from_matrix(&second).unwrap();
        let p = f.involution_hypothesis_a().unwrap();
        assert_eq!(p.to_string(), "(1,2)(4,5)(7,8)(10,11)(14,15)(16,18)(19,20)");
        assert!(verify_automorphism(&f.code(), &p).unwrap());
    }

    #[test]
    fn class_b_rejects_involution() {
        use EBlock::*;
        let f = CanonicalEM::from_grid(2, vec![vec![E1], vec![E2]]).unwrap();
        assert!(f.involution_hypothesis_a().is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let a = SigmaAction::new(2);
        assert_eq!(
            canonical_em_form_from_pairs(&[cw("110 000")], a),
            Err(Error::OddDimension(1))
        );
        assert!(canonical_em_form_from_pairs(&[cw("110 000"), cw("101 000")], a).is_err());
        assert!(CanonicalEM::from_matrix(&Gf2Matrix::from_strs(&["111", "000"])).is_err());
    }

    #[test]
    fn from_code_round_trip() {
        let c = LinearCode::from_strs(&[
            "111 000 000 111 000",
            "000 110 101 000 101",
            "000 011 110 000 110",
            "000 101 101 101 011",
            "000 110 110 110 101",
        ]);
        let f = canonical_em_form(&c).unwrap();
        assert_eq!(f.k(), 2);
        let e = huffman_decompose(&c).unwrap().even;
        assert_eq!(f.original_code(), e);
    }
}
