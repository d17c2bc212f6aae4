//! Exact linear algebra over the two-element field.
//!
//! Every homology, cohomology and cocycle-solving step in the crate reduces
//! to the three operations here: [`BitMatrix::rank`],
//! [`BitMatrix::kernel_basis`] and [`BitMatrix::solve`]. Matrices are dense
//! and bit-packed row-major into `u64` words; row addition is word-wise XOR.
//! All matrices in this problem domain are tiny (tens of rows), so density
//! costs nothing and elimination stays branch-light.
//!
//! Elimination always picks the first usable pivot left-to-right, so ranks,
//! kernel bases and particular solutions are deterministic.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A vector over GF(2), bit-packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    /// Builds a vector from 0/1 entries.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        if value {
            self.words[i / 64] |= 1u64 << (i % 64);
        } else {
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Addition in GF(2).
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor_assign: length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit, or `None` for the zero vector.
    pub fn leading_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                let i = wi * 64 + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    /// Parity of the overlap with `other`; the GF(2) dot product.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot: length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), rows bit-packed into `u64` words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = cols.div_ceil(64);
        Self { rows, cols, row_words, words: vec![0; rows * row_words] }
    }

    /// Builds a matrix from 0/1 row slices; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b != 0);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.words[i * self.row_words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = i * self.row_words + j / 64;
        if value {
            self.words[w] |= 1u64 << (j % 64);
        } else {
            self.words[w] &= !(1u64 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> BitVec {
        let mut v = BitVec::zeros(self.cols);
        v.words.copy_from_slice(&self.words[i * self.row_words..(i + 1) * self.row_words]);
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, F2Error> {
        if x.len() != self.cols {
            return Err(F2Error::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.row(i).dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.row_words {
            self.words.swap(a * self.row_words + w, b * self.row_words + w);
        }
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let row = self.row(src);
        for (w, word) in row.words.iter().enumerate() {
            self.words[dst * self.row_words + w] ^= word;
        }
    }

    /// Reduced row echelon form together with the pivot columns. `carry`,
    /// when present, receives the same row operations (used by `solve`).
    fn rref(&self, carry: Option<&mut BitVec>) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut carry = carry;
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            let Some(pivot_row) = (next_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(next_row, pivot_row);
            if let Some(c) = carry.as_deref_mut() {
                let (a, b) = (c.get(next_row), c.get(pivot_row));
                c.set(next_row, b);
                c.set(pivot_row, a);
            }
            for r in 0..m.rows {
                if r != next_row && m.get(r, col) {
                    m.xor_rows(r, next_row);
                    if let Some(c) = carry.as_deref_mut() {
                        if c.get(next_row) {
                            c.flip(r);
                        }
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Rank over GF(2). The input is not mutated.
    pub fn rank(&self) -> usize {
        self.rref(None).1.len()
    }

    /// A basis of the right kernel `{v : m v = 0}`, one vector per free
    /// column, in column order. `cols == rank + kernel_basis.len()` always.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (m, pivots) = self.rref(None);
        let pivot_set: Vec<Option<usize>> = {
            let mut by_col = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                by_col[c] = Some(r);
            }
            by_col
        };
        let mut basis = Vec::new();
        for (free, pivot) in pivot_set.iter().enumerate() {
            if pivot.is_some() {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (r, &c) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `m x = b`. Returns `Ok(None)` when `b` is outside the column
    /// span and an error when `b` has the wrong length. The returned
    /// solution is the echelon particular solution (free variables zero),
    /// so it is deterministic.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, F2Error> {
        if b.len() != self.rows {
            return Err(F2Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut rhs = b.clone();
        let (_, pivots) = self.rref(Some(&mut rhs));
        // Inconsistent iff a zero row of the reduced matrix has rhs 1.
        for r in pivots.len()..self.rows {
            if rhs.get(r) {
                return Ok(None);
            }
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if rhs.get(r) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incrementally echelonized span of GF(2) vectors. Used to complete bases
/// modulo a subspace (homology and cohomology representatives).
#[derive(Clone, Default)]
pub struct Span {
    // Echelon rows keyed by leading-one position.
    rows: Vec<BitVec>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vectors<'a, I: IntoIterator<Item = &'a BitVec>>(vs: I) -> Self {
        let mut s = Self::new();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for row in &self.rows {
            let lead = row.leading_one().expect("span rows are nonzero");
            if v.get(lead) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true when `v` was independent of the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        let lead = r.leading_one().unwrap();
        let at = self
            .rows
            .iter()
            .position(|row| row.leading_one().unwrap() > lead)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.next_u64() & 1 == 1);
            }
        }
        m
    }

    #[test]
    fn rank_identity() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_equal_rows() {
        let m = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_top_boundary_of_cd2() {
        // Boundary vectors of the three 4-cells of the 28-cell complex over
        // the nine 3-cells (a, b, c, d, e+, e-, A_inf, B_inf, C_inf).
        let m = BitMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0, 0, 1, 1, 0], // A
            vec![0, 0, 1, 0, 0, 1, 1, 1, 0], // B
            vec![0, 0, 0, 1, 1, 0, 0, 0, 0], // C
        ]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_of_symmetric_pair() {
        let m = BitMatrix::from_rows(&[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(k[0].get(0) && k[0].get(1));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_boundary_is_everything() {
        // One 0-cell, five 1-cells, all boundaries zero.
        let m = BitMatrix::zeros(1, 5);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 5);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_identity_echoes_rhs() {
        let m = BitMatrix::identity(4);
        let b = BitVec::from_bits([true, false, true, true]);
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_inconsistent_column() {
        // Two copies of the same single-column condition, contradictory rhs.
        let m = BitMatrix::from_rows(&[vec![1], vec![1]]);
        let b = BitVec::from_bits([true, false]);
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let m = BitMatrix::identity(2);
        let b = BitVec::zeros(3);
        assert!(matches!(m.solve(&b), Err(F2Error::DimensionMismatch { .. })));
    }

    #[test]
    fn solve_with_zero_columns() {
        // Empty column space: only the zero rhs is solvable.
        let m = BitMatrix::zeros(3, 0);
        assert!(m.solve(&BitVec::zeros(3)).unwrap().is_some());
        let mut b = BitVec::zeros(3);
        b.set(1, true);
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn rank_equals_transpose_rank_randomized() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let (r, c) = (1 + rng.below(9), 1 + rng.below(9));
            let m = random_matrix(&mut rng, r, c);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn rank_nullity_randomized() {
        let mut rng = SplitMix64::new(12);
        for _ in 0..200 {
            let (r, c) = (1 + rng.below(9), 1 + rng.below(9));
            let m = random_matrix(&mut rng, r, c);
            let k = m.kernel_basis();
            assert_eq!(m.cols(), m.rank() + k.len());
            for v in &k {
                assert!(m.mul_vec(v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn solve_replay_randomized() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..200 {
            let (r, c) = (1 + rng.below(8), 1 + rng.below(8));
            let m = random_matrix(&mut rng, r, c);
            // Pick b in the column span so a solution must exist.
            let x0 = BitVec::from_bits((0..m.cols()).map(|_| rng.next_u64() & 1 == 1));
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("b is in the span");
            assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn rank_invariant_under_permutations() {
        let mut rng = SplitMix64::new(14);
        for _ in 0..100 {
            let (r, c) = (2 + rng.below(7), 2 + rng.below(7));
            let m = random_matrix(&mut rng, r, c);
            let mut p = m.clone();
            // A few random row and column swaps.
            for _ in 0..8 {
                let (a, b) = (rng.below(p.rows()), rng.below(p.rows()));
                p.swap_rows(a, b);
            }
            let mut q = BitMatrix::zeros(p.rows(), p.cols());
            let mut cols: Vec<usize> = (0..p.cols()).collect();
            for i in (1..cols.len()).rev() {
                cols.swap(i, rng.below(i + 1));
            }
            for i in 0..p.rows() {
                for (jq, &jp) in cols.iter().enumerate() {
                    q.set(i, jq, p.get(i, jp));
                }
            }
            assert_eq!(m.rank(), q.rank());
        }
    }

    #[test]
    fn span_completion() {
        let a = BitVec::from_bits([true, false, false]);
        let b = BitVec::from_bits([true, true, false]);
        let mut s = Span::with_vectors([&a]);
        assert!(s.contains(&a));
        assert!(!s.contains(&b));
        assert!(s.insert(&b));
        assert!(!s.insert(&b));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&BitVec::from_bits([false, true, false])));
    }
}
