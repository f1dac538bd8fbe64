//! Bit-packed dense matrices over GF(2): rank, kernel basis, column-span
//! membership. Elimination always runs on a copy; matrices are value types.

use crate::bits::{words_for, Bitset};

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    payload: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row,
            payload: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.payload[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if value {
            self.payload[w] |= mask;
        } else {
            self.payload[w] &= !mask;
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.payload[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// XORs row `src` into row `dst`, starting at word `from_word`.
    fn xor_rows(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let w = self.words_per_row;
        let (lo, hi) = if dst < src { (dst, src) } else { (src, dst) };
        let (head, tail) = self.payload.split_at_mut(hi * w);
        let lo_row = &mut head[lo * w..lo * w + w];
        let hi_row = &mut tail[..w];
        let (d, s): (&mut [u64], &[u64]) = if dst > src {
            (hi_row, lo_row)
        } else {
            (lo_row, hi_row)
        };
        for i in from_word..w {
            d[i] ^= s[i];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.payload.swap(a * w + i, b * w + i);
        }
    }

    pub fn column(&self, c: usize) -> Bitset {
        let mut out = Bitset::new(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                out.set(r, true);
            }
        }
        out
    }

    /// Matrix-vector product over GF(2); `x` has one bit per column.
    pub fn mat_vec(&self, x: &Bitset) -> Bitset {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let mut out = Bitset::new(self.rows);
        for r in 0..self.rows {
            let mut parity = 0u32;
            for (&a, &b) in self.row(r).iter().zip(x.words()) {
                parity ^= (a & b).count_ones() & 1;
            }
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Rank via forward elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            // first available row with a 1 in this column
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            let from_word = col / 64;
            for r2 in pivot_row + 1..m.rows {
                if m.get(r2, col) {
                    m.xor_rows(r2, pivot_row, from_word);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Reduced row echelon form; returns the matrix together with the list
    /// of (row, pivot column) pairs.
    fn rref(&self) -> (BitMatrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            let from_word = col / 64;
            for r2 in 0..m.rows {
                if r2 != pivot_row && m.get(r2, col) {
                    // the pivot row is zero left of `col`, so the XOR can
                    // start at the pivot word for rows above it as well
                    m.xor_rows(r2, pivot_row, from_word);
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel; each vector has one bit per column.
    /// The basis size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Bitset> {
        let (m, pivots) = self.rref();
        let mut pivot_of_col = vec![usize::MAX; self.cols];
        for &(r, c) in &pivots {
            pivot_of_col[c] = r;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in 0..self.cols {
            if pivot_of_col[free] != usize::MAX {
                continue;
            }
            let mut v = Bitset::new(self.cols);
            v.set(free, true);
            for &(r, c) in &pivots {
                if m.get(r, free) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M x = target` over GF(2). Returns a witness `x` (one bit per
    /// column) if the target lies in the column span, `None` otherwise.
    pub fn solve(&self, target: &Bitset) -> Option<Bitset> {
        assert_eq!(target.len(), self.rows, "dimension mismatch");
        // Augment with the target as an extra column and reduce.
        let mut aug = BitMatrix::new(self.rows, self.cols + 1);
        for r in 0..self.rows {
            let src = self.row(r).to_vec();
            let dst =
                &mut aug.payload[r * aug.words_per_row..r * aug.words_per_row + self.words_per_row];
            dst.copy_from_slice(&src);
            if target.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let (m, pivots) = aug.rref();
        let mut x = Bitset::new(self.cols);
        for &(r, c) in &pivots {
            if c == self.cols {
                // pivot in the augmented column: inconsistent system
                return None;
            }
            if m.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    /// Whether `target` lies in the span of the columns.
    pub fn in_column_span(&self, target: &Bitset) -> bool {
        self.solve(target).is_some()
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            for c in 0..self.cols.min(64) {
                write!(f, "{}", if self.get(r, c) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Push/pop echelon basis for depth-first subset walks: vectors keyed by
/// lowest set bit, removable in LIFO order.
pub(crate) struct EchelonStack {
    basis: Vec<(usize, Vec<u64>)>,
}

impl EchelonStack {
    pub(crate) fn new() -> Self {
        Self { basis: Vec::new() }
    }

    pub(crate) fn lowest(v: &[u64]) -> Option<usize> {
        v.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub(crate) fn find(&self, pivot: usize) -> Option<&[u64]> {
        self.basis
            .iter()
            .find(|(p, _)| *p == pivot)
            .map(|(_, b)| b.as_slice())
    }

    /// Reduces `v` in place; true iff it vanished (lies in the span).
    pub(crate) fn reduce(&self, v: &mut [u64]) -> bool {
        loop {
            let Some(low) = Self::lowest(v) else {
                return true;
            };
            let Some(b) = self.find(low) else {
                return false;
            };
            for (dst, src) in v.iter_mut().zip(b) {
                *dst ^= src;
            }
        }
    }

    /// Reduces `col` and pushes the remainder. Returns false (and pushes
    /// nothing) when the column is already in the span.
    pub(crate) fn push(&mut self, col: &[u64]) -> bool {
        let mut v = col.to_vec();
        if self.reduce(&mut v) {
            return false;
        }
        let pivot = Self::lowest(&v).expect("nonzero after reduce");
        self.basis.push((pivot, v));
        true
    }

    pub(crate) fn pop(&mut self) {
        self.basis.pop();
    }
}

/// Streaming GF(2) rank: columns are inserted one at a time into an echelon
/// basis keyed by lowest set bit. Peak memory is one basis, never the whole
/// matrix, which is what the big boundary-operator ranks need.
pub struct Gf2RankAccumulator {
    width: usize,
    words: usize,
    /// `basis[p]` holds the suffix (from word `p/64` on) of the vector whose
    /// lowest set bit is `p`; bits below the pivot are zero by construction.
    basis: Vec<Option<Box<[u64]>>>,
    rank: usize,
    cap: Option<usize>,
}

impl Gf2RankAccumulator {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            words: words_for(width),
            basis: vec![None; width],
            rank: 0,
            cap: None,
        }
    }

    /// Rank is mathematically bounded by `cap` for the stream about to be
    /// inserted; once reached, further inserts are no-ops. The caller owns
    /// the proof obligation (e.g. boundary columns of the full simplex).
    pub fn with_cap(width: usize, cap: usize) -> Self {
        let mut a = Self::new(width);
        a.cap = Some(cap);
        a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn saturated(&self) -> bool {
        self.cap.is_some_and(|c| self.rank >= c) || self.rank >= self.width
    }

    /// Reduces `vec` (scratch, `words` long) against the basis in place and
    /// inserts the nonzero remainder. Returns true iff the rank grew.
    pub fn insert(&mut self, vec: &mut [u64]) -> bool {
        debug_assert_eq!(vec.len(), self.words);
        if self.saturated() {
            return false;
        }
        let mut wi = 0;
        loop {
            while wi < self.words && vec[wi] == 0 {
                wi += 1;
            }
            if wi == self.words {
                return false;
            }
            let pivot = wi * 64 + vec[wi].trailing_zeros() as usize;
            match &self.basis[pivot] {
                Some(b) => {
                    for (dst, src) in vec[wi..].iter_mut().zip(b.iter()) {
                        *dst ^= src;
                    }
                }
                None => {
                    self.basis[pivot] = Some(vec[wi..].to_vec().into_boxed_slice());
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// Whether `vec` lies in the span of the inserted vectors. Does not
    /// modify the accumulator.
    pub fn in_span(&self, vec: &[u64]) -> bool {
        debug_assert_eq!(vec.len(), self.words);
        let mut v = vec.to_vec();
        let mut wi = 0;
        loop {
            while wi < self.words && v[wi] == 0 {
                wi += 1;
            }
            if wi == self.words {
                return true;
            }
            let pivot = wi * 64 + v[wi].trailing_zeros() as usize;
            match &self.basis[pivot] {
                Some(b) => {
                    for (dst, src) in v[wi..].iter_mut().zip(b.iter()) {
                        *dst ^= src;
                    }
                }
                None => return false,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[u8]]) -> BitMatrix {
        let mut m = BitMatrix::new(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v != 0);
            }
        }
        m
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::new(4, 5).rank(), 0);
        // boundary of the triangle on 3 vertices
        let m = from_rows(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_sizes() {
        let m = BitMatrix::new(3, 5);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 5);
        assert!(BitMatrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_vectors_lie_in_kernel() {
        let m = from_rows(&[
            &[1, 0, 1, 1, 0],
            &[0, 1, 1, 0, 1],
            &[1, 1, 0, 1, 1],
            &[0, 0, 0, 1, 1],
        ]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 5 - m.rank());
        for v in &basis {
            assert!(m.mat_vec(v).is_zero());
        }
        // independence: stack the basis as rows and check full rank
        let mut stack = BitMatrix::new(basis.len(), 5);
        for (r, v) in basis.iter().enumerate() {
            for c in v.iter_ones() {
                stack.set(r, c, true);
            }
        }
        assert_eq!(stack.rank(), basis.len());
    }

    #[test]
    fn solve_and_span() {
        let m = from_rows(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 0]]);
        // zero target: witness exists (possibly empty)
        let zero = Bitset::new(3);
        let w = m.solve(&zero).unwrap();
        assert!(m.mat_vec(&w).is_zero());
        // a single column is in the span
        let t = m.column(2);
        let w = m.solve(&t).unwrap();
        assert_eq!(m.mat_vec(&w), t);
        // something outside the span
        let mut t = Bitset::new(3);
        t.set(2, true);
        assert!(m.solve(&t).is_none());
        assert!(!m.in_column_span(&t));
    }

    #[test]
    fn accumulator_matches_rank() {
        let m = from_rows(&[
            &[1, 0, 1, 1, 0],
            &[0, 1, 1, 0, 1],
            &[1, 1, 0, 1, 1],
            &[0, 0, 0, 1, 1],
        ]);
        let mut acc = Gf2RankAccumulator::new(4);
        for c in 0..5 {
            let col = m.column(c);
            let mut words = col.words().to_vec();
            acc.insert(&mut words);
        }
        assert_eq!(acc.rank(), m.rank());
        // span test agrees with solve
        let t = m.column(0);
        assert!(acc.in_span(t.words()));
    }
}
