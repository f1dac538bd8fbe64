//! Boundary operators of a sample as explicit matrices.
//!
//! Rows index `(k-1)`-simplices by colex rank; columns index `k`-simplices.
//! For `k = d` only the present simplices contribute columns (in rank
//! order); for `k = d-1` the skeleton is full, so all `C(n, d)` columns
//! appear. For `k = 0` the single row is the augmentation (reduced
//! homology): every vertex maps to the empty simplex with coefficient +1.

use crate::error::{Error, Result};
use crate::model::ComplexSample;
use crate::simplex::{enumerate_simplices, simplex_count, unrank_simplex, Simplex};

use super::{BitMatrix, GFpMatrix};

fn check_k(sample: &ComplexSample, k: usize) -> Result<()> {
    let d = sample.d();
    if k != d && k + 1 != d {
        return Err(Error::InvalidParams(format!(
            "boundary matrix only supported for k in {{d-1, d}} = {{{}, {}}}, got {k}",
            d - 1,
            d
        )));
    }
    Ok(())
}

/// Number of rows of the matrix of the boundary operator in dimension `k`.
pub fn boundary_rows(n: usize, k: usize) -> u64 {
    if k == 0 {
        1
    } else {
        simplex_count(n, k - 1)
    }
}

fn column_simplices(sample: &ComplexSample, k: usize) -> Vec<Simplex> {
    let n = sample.n();
    if k == sample.d() {
        sample
            .present_ranks()
            .map(|r| unrank_simplex(r, n, k).expect("present rank in range"))
            .collect()
    } else {
        enumerate_simplices(n, k).expect("k+1 <= n").collect()
    }
}

/// Matrix of the boundary operator over GF(2); signs collapse to 1.
pub fn boundary_matrix_gf2(sample: &ComplexSample, k: usize) -> Result<BitMatrix> {
    check_k(sample, k)?;
    let rows = boundary_rows(sample.n(), k) as usize;
    let columns = column_simplices(sample, k);
    let mut m = BitMatrix::new(rows, columns.len());
    for (j, s) in columns.iter().enumerate() {
        if k == 0 {
            m.set(0, j, true);
        } else {
            for (face, _) in s.facet_ranks() {
                m.set(face.0 as usize, j, true);
            }
        }
    }
    Ok(m)
}

/// Matrix of the boundary operator over GF(q) with true signs `(-1)^i`.
pub fn boundary_matrix_gfp(sample: &ComplexSample, k: usize, q: u64) -> Result<GFpMatrix> {
    check_k(sample, k)?;
    let rows = boundary_rows(sample.n(), k) as usize;
    let columns = column_simplices(sample, k);
    let mut m = GFpMatrix::new(rows, columns.len(), q)?;
    for (j, s) in columns.iter().enumerate() {
        if k == 0 {
            m.set_signed(0, j, 1);
        } else {
            for (face, sign) in s.facet_ranks() {
                m.set_signed(face.0 as usize, j, sign as i64);
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bitset;
    use crate::model::ComplexSample;
    use crate::simplex::Simplex;

    fn full_sample(n: usize, d: usize) -> ComplexSample {
        let all = enumerate_simplices(n, d).unwrap();
        ComplexSample::from_simplices(n, d, all).unwrap()
    }

    #[test]
    fn edges_have_two_endpoints() {
        let s = full_sample(3, 1);
        let m = boundary_matrix_gf2(&s, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        for c in 0..3 {
            assert_eq!(m.column(c).count_ones(), 2);
        }
    }

    #[test]
    fn triangles_have_three_edges() {
        let s = full_sample(4, 2);
        let m = boundary_matrix_gf2(&s, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 4));
        for c in 0..4 {
            assert_eq!(m.column(c).count_ones(), 3);
        }
    }

    #[test]
    fn tetrahedron_boundary_columns_sum_to_zero() {
        // the four triangles bounding a tetrahedron form a 2-cycle
        let s = full_sample(4, 2);
        let m = boundary_matrix_gf2(&s, 2).unwrap();
        let mut acc = Bitset::new(6);
        for c in 0..4 {
            acc.xor_with(&m.column(c));
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn augmentation_row_for_d1() {
        let s = full_sample(5, 1);
        let m = boundary_matrix_gf2(&s, 0).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 5));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn signed_matrix_reduces_correctly() {
        let s = full_sample(4, 2);
        let m = boundary_matrix_gfp(&s, 2, 5).unwrap();
        // each column: one +1 face, one -1, one +1
        for c in 0..4 {
            let col = m.column(c);
            let nonzero: Vec<u64> = col.into_iter().filter(|&v| v != 0).collect();
            assert_eq!(nonzero.len(), 3);
            assert_eq!(nonzero.iter().filter(|&&v| v == 1).count(), 2);
            assert_eq!(nonzero.iter().filter(|&&v| v == 4).count(), 1);
        }
    }

    #[test]
    fn rejects_unsupported_dimension() {
        let s = full_sample(5, 2);
        assert!(boundary_matrix_gf2(&s, 0).is_err());
        let single = ComplexSample::from_simplices(5, 2, [Simplex::new(vec![0, 1, 2]).unwrap()])
            .unwrap();
        assert!(boundary_matrix_gf2(&single, 2).is_ok());
    }
}
