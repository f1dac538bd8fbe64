//! Smith normal form and fraction-free rank over the integers, for torsion
//! detection. Arbitrary-precision entries: no overflow, no modular tricks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::linalg::boundary_rows;
use crate::model::ComplexSample;
use crate::simplex::{enumerate_simplices, unrank_simplex};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::new(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set_i64(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn set_i64(&mut self, r: usize, c: usize, v: i64) {
        self.set(r, c, BigInt::from(v));
    }
}

/// Diagonal of the Smith normal form: the nonzero invariant factors
/// `d_1 | d_2 | ... | d_r`, normalized positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SnfResult {
    diagonal: Vec<BigInt>,
}

impl SnfResult {
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than 1 (in chain order): the torsion
    /// coefficients of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }
}

/// Classical Smith normal form by row/column reduction with min-abs pivoting
/// and the divisibility-repair pass. Only the diagonal is produced; the
/// unimodular transforms are not tracked.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diagonal = Vec::new();

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&a, k) else {
            break;
        };
        swap_rows(&mut a, k, pi);
        swap_cols(&mut a, k, pj);

        loop {
            // clear column k below the pivot
            let mut dirty = false;
            for i in k + 1..rows {
                if !a.get(i, k).is_zero() {
                    let q = a.get(i, k) / a.get(k, k);
                    if !q.is_zero() {
                        row_sub_mul(&mut a, i, k, &q, k);
                    }
                    if !a.get(i, k).is_zero() {
                        // remainder is smaller than the pivot: promote it
                        swap_rows(&mut a, k, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // clear row k right of the pivot
            for j in k + 1..cols {
                if !a.get(k, j).is_zero() {
                    let q = a.get(k, j) / a.get(k, k);
                    if !q.is_zero() {
                        col_sub_mul(&mut a, j, k, &q, k);
                    }
                    if !a.get(k, j).is_zero() {
                        swap_cols(&mut a, k, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility repair: the pivot must divide the rest of the
            // submatrix; pull a bad row up and keep reducing
            if let Some(bad_row) = find_non_divisible(&a, k) {
                row_add(&mut a, k, bad_row, k + 1);
                continue;
            }
            break;
        }
        let mut d = a.get(k, k).clone();
        if d.is_negative() {
            d = -d;
        }
        diagonal.push(d);
    }

    debug_assert!(diagonal
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    SnfResult { diagonal }
}

fn min_abs_nonzero(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            match &best {
                Some((_, _, b)) if *b <= abs => {}
                _ => best = Some((i, j, abs)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn find_non_divisible(a: &IntMatrix, k: usize) -> Option<usize> {
    let pivot = a.get(k, k).clone();
    for i in k + 1..a.rows {
        for j in k + 1..a.cols {
            if !(a.get(i, j) % &pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn swap_rows(a: &mut IntMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for c in 0..a.cols {
        a.entries.swap(r1 * a.cols + c, r2 * a.cols + c);
    }
}

fn swap_cols(a: &mut IntMatrix, c1: usize, c2: usize) {
    if c1 == c2 {
        return;
    }
    for r in 0..a.rows {
        a.entries.swap(r * a.cols + c1, r * a.cols + c2);
    }
}

/// row_i -= q * row_k, from column `from` on (earlier columns already zero).
fn row_sub_mul(a: &mut IntMatrix, i: usize, k: usize, q: &BigInt, from: usize) {
    for c in from..a.cols {
        let v = a.get(k, c) * q;
        let cell = &mut a.entries[i * a.cols + c];
        *cell -= v;
    }
}

/// col_j -= q * col_k, from row `from` on.
fn col_sub_mul(a: &mut IntMatrix, j: usize, k: usize, q: &BigInt, from: usize) {
    for r in from..a.rows {
        let v = a.get(r, k) * q;
        let cell = &mut a.entries[r * a.cols + j];
        *cell -= v;
    }
}

/// row_k += row_i, from column `from` on.
fn row_add(a: &mut IntMatrix, k: usize, i: usize, from: usize) {
    for c in from..a.cols {
        let v = a.get(i, c).clone();
        let cell = &mut a.entries[k * a.cols + c];
        *cell += v;
    }
}

/// Rank over Z (equivalently over Q) by Bareiss fraction-free elimination.
/// Independent of [`smith_normal_form`]: the two must agree.
pub fn integer_rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot_row) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        swap_rows(&mut a, r, pivot_row);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = a.get(r, c) * a.get(i, j) - a.get(i, c) * a.get(r, j);
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a.set(i, j, q);
            }
            a.set_i64(i, c, 0);
        }
        prev = a.get(r, c).clone();
        r += 1;
    }
    r
}

/// Signed boundary matrix of a sample over Z (see the GF(2)/GF(q) builders
/// for the row/column conventions).
pub fn boundary_matrix_int(sample: &ComplexSample, k: usize) -> Result<IntMatrix> {
    let d = sample.d();
    if k != d && k + 1 != d {
        return Err(crate::error::Error::InvalidParams(format!(
            "boundary matrix only supported for k in {{d-1, d}}, got {k}"
        )));
    }
    let n = sample.n();
    let rows = boundary_rows(n, k) as usize;
    let columns: Vec<_> = if k == d {
        sample
            .present_ranks()
            .map(|r| unrank_simplex(r, n, k).expect("rank in range"))
            .collect()
    } else {
        enumerate_simplices(n, k)?.collect()
    };
    let mut m = IntMatrix::new(rows, columns.len());
    for (j, s) in columns.iter().enumerate() {
        if k == 0 {
            m.set_i64(0, j, 1);
        } else {
            for (face, sign) in s.facet_ranks() {
                m.set_i64(face.0 as usize, j, sign as i64);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_in_snf() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), &[BigInt::from(2)]);
        assert_eq!(snf.rank(), 1);
        assert_eq!(snf.torsion(), vec![BigInt::from(2)]);
    }

    #[test]
    fn proportional_rows() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(integer_rank(&m), 1);
        assert_eq!(smith_normal_form(&m).rank(), 1);
    }

    #[test]
    fn identity_rank() {
        let mut m = IntMatrix::new(4, 4);
        for i in 0..4 {
            m.set_i64(i, i, 1);
        }
        assert_eq!(integer_rank(&m), 4);
    }

    #[test]
    fn known_invariant_factors() {
        // diag(2) + gcd structure: SNF of [[2,0],[0,3]] is [1,6]
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.diagonal(),
            &[BigInt::from(1), BigInt::from(6)]
        );
        // classical example with invariant factors 2, 6, 12
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let snf = smith_normal_form(&m);
        assert_eq!(
            snf.diagonal(),
            &[BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn divisibility_chain_holds() {
        let m = IntMatrix::from_rows(&[
            vec![6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let snf = smith_normal_form(&m);
        for w in snf.diagonal().windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "{:?}", snf.diagonal());
        }
        assert_eq!(snf.rank(), integer_rank(&m));
    }
}
