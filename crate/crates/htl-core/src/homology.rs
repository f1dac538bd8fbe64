//! Betti numbers and homology-vanishing predicates for samples, over GF(2),
//! GF(q), and Z. Reduced homology throughout: the empty simplex augments the
//! chain complex, so for d = 1 the codimension-1 number counts components
//! minus one.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{boundary_rows, is_prime, Gf2RankAccumulator, GfpRankAccumulator};
use crate::model::ComplexSample;
use crate::simplex::{binomial, enumerate_simplices, simplex_count, unrank_simplex};
use crate::snf::{boundary_matrix_int, integer_rank, smith_normal_form};

/// Coefficient system for homology computations.
///
/// Arbitrary finite abelian coefficients reduce to prime fields plus Z by
/// the structure theorem; only those are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSpec {
    Gf2,
    Gfp(u64),
    Int,
}

impl CoefficientSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(Self::Gf2),
            "int" => Ok(Self::Int),
            _ => {
                if let Some(q) = s.strip_prefix("gfp:") {
                    let q: u64 = q
                        .parse()
                        .map_err(|_| Error::InvalidParams(format!("bad modulus in {s:?}")))?;
                    if !is_prime(q) || q >= 1 << 31 {
                        return Err(Error::NotPrime(q));
                    }
                    Ok(Self::Gfp(q))
                } else {
                    Err(Error::InvalidParams(format!(
                        "unknown coefficient spec {s:?} (use gf2 | gfp:Q | int)"
                    )))
                }
            }
        }
    }
}

impl std::fmt::Display for CoefficientSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Gf2 => write!(f, "gf2"),
            Self::Gfp(q) => write!(f, "gfp:{q}"),
            Self::Int => write!(f, "int"),
        }
    }
}

/// Betti numbers of one sample, plus the ranks they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyReport {
    pub beta_top: u64,
    pub beta_codim1: u64,
    /// Torsion coefficients of the codimension-1 homology; populated in INT
    /// mode only. Top homology of a d-complex is free, so it has no torsion
    /// field.
    pub torsion_codim1: Option<Vec<BigInt>>,
    pub rank_top_boundary: u64,
    pub nullity_codim1: u64,
    pub num_present: u64,
}

/// Rank of the top boundary operator restricted to the present simplices.
///
/// Streams one facet-support column per present simplex into an echelon
/// basis, so peak memory is one basis rather than the whole matrix. The
/// accumulator is capped at `C(n-1, d)`: the columns are a subset of the
/// full-simplex boundary, whose rank is exactly that, so once the cap is
/// reached the remaining columns are dependent.
pub fn rank_top_boundary(sample: &ComplexSample, coeff: CoefficientSpec) -> u64 {
    let (n, d) = (sample.n(), sample.d());
    let width = simplex_count(n, d - 1) as usize;
    let cap = binomial(n - 1, d) as usize;
    match coeff {
        CoefficientSpec::Gf2 => {
            let mut acc = Gf2RankAccumulator::with_cap(width, cap);
            let mut scratch = vec![0u64; width.div_ceil(64)];
            for rank in sample.present_ranks() {
                if acc.saturated() {
                    break;
                }
                let s = unrank_simplex(rank, n, d).expect("present rank in range");
                for (face, _) in s.facet_ranks() {
                    let i = face.0 as usize;
                    scratch[i / 64] |= 1 << (i % 64);
                }
                acc.insert(&mut scratch);
                scratch.fill(0);
            }
            acc.rank() as u64
        }
        CoefficientSpec::Gfp(q) => {
            let mut acc = GfpRankAccumulator::with_cap(width, q, cap).expect("validated prime");
            for rank in sample.present_ranks() {
                if acc.saturated() {
                    break;
                }
                let s = unrank_simplex(rank, n, d).expect("present rank in range");
                let mut col = vec![0u64; width];
                for (face, sign) in s.facet_ranks() {
                    col[face.0 as usize] = if sign > 0 { 1 } else { q - 1 };
                }
                acc.insert(&mut col);
            }
            acc.rank() as u64
        }
        CoefficientSpec::Int => {
            let m = boundary_matrix_int(sample, d).expect("k = d is valid");
            integer_rank(&m) as u64
        }
    }
}

/// Rank of the boundary operator in dimension `k` of the sample,
/// `k in {d-1, d}`. For `k = d-1` the skeleton is full.
pub fn rank_boundary(sample: &ComplexSample, k: usize, coeff: CoefficientSpec) -> Result<u64> {
    let (n, d) = (sample.n(), sample.d());
    if k == d {
        return Ok(rank_top_boundary(sample, coeff));
    }
    if k + 1 != d {
        return Err(Error::InvalidParams(format!(
            "rank_boundary supports k in {{d-1, d}}, got {k}"
        )));
    }
    let width = boundary_rows(n, k) as usize;
    // full-simplex boundary rank in dimension k is C(n-1, k)
    let cap = binomial(n - 1, k) as usize;
    match coeff {
        CoefficientSpec::Gf2 => {
            let mut acc = Gf2RankAccumulator::with_cap(width, cap);
            let mut scratch = vec![0u64; width.div_ceil(64)];
            for s in enumerate_simplices(n, k)? {
                if acc.saturated() {
                    break;
                }
                if k == 0 {
                    scratch[0] |= 1;
                } else {
                    for (face, _) in s.facet_ranks() {
                        let i = face.0 as usize;
                        scratch[i / 64] |= 1 << (i % 64);
                    }
                }
                acc.insert(&mut scratch);
                scratch.fill(0);
            }
            Ok(acc.rank() as u64)
        }
        CoefficientSpec::Gfp(q) => {
            let mut acc = GfpRankAccumulator::with_cap(width, q, cap)?;
            for s in enumerate_simplices(n, k)? {
                if acc.saturated() {
                    break;
                }
                let mut col = vec![0u64; width];
                if k == 0 {
                    col[0] = 1;
                } else {
                    for (face, sign) in s.facet_ranks() {
                        col[face.0 as usize] = if sign > 0 { 1 } else { q - 1 };
                    }
                }
                acc.insert(&mut col);
            }
            Ok(acc.rank() as u64)
        }
        CoefficientSpec::Int => {
            let m = boundary_matrix_int(sample, k)?;
            Ok(integer_rank(&m) as u64)
        }
    }
}

/// Top Betti number: `|Delta(d)| - rank(boundary_d)`. Since there are no
/// (d+1)-cells, the top homology is the cycle space; over Z it is free, so
/// this number describes it completely.
pub fn betti_top(sample: &ComplexSample, coeff: CoefficientSpec) -> u64 {
    sample.num_present() - rank_top_boundary(sample, coeff)
}

/// Reduced codimension-1 Betti number: `C(n-1, d) - rank(boundary_d)`.
/// The full (d-1)-skeleton pins the cycle space: nullity of the lower
/// boundary is exactly `C(n-1, d)`.
pub fn betti_codim1(sample: &ComplexSample, coeff: CoefficientSpec) -> u64 {
    let cycles = binomial(sample.n() - 1, sample.d());
    cycles - rank_top_boundary(sample, coeff)
}

/// Torsion coefficients of the codimension-1 integer homology: the
/// invariant factors of the top boundary greater than 1.
pub fn torsion_codim1(sample: &ComplexSample) -> Vec<BigInt> {
    let m = boundary_matrix_int(sample, sample.d()).expect("k = d is valid");
    smith_normal_form(&m).torsion()
}

/// Whether the top homology is nonzero over the given coefficients.
pub fn homology_nonzero_top(sample: &ComplexSample, coeff: CoefficientSpec) -> bool {
    betti_top(sample, coeff) > 0
}

/// Whether the codimension-1 homology is nonzero. For INT this includes
/// torsion.
pub fn codim1_nonzero(sample: &ComplexSample, coeff: CoefficientSpec) -> bool {
    if betti_codim1(sample, coeff) > 0 {
        return true;
    }
    matches!(coeff, CoefficientSpec::Int) && !torsion_codim1(sample).is_empty()
}

/// Full report for one sample.
pub fn report(sample: &ComplexSample, coeff: CoefficientSpec) -> HomologyReport {
    let rank = rank_top_boundary(sample, coeff);
    let nullity_codim1 = binomial(sample.n() - 1, sample.d());
    HomologyReport {
        beta_top: sample.num_present() - rank,
        beta_codim1: nullity_codim1 - rank,
        torsion_codim1: matches!(coeff, CoefficientSpec::Int)
            .then(|| torsion_codim1(sample)),
        rank_top_boundary: rank,
        nullity_codim1,
        num_present: sample.num_present(),
    }
}
