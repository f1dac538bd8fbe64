//! Exact probability of nonzero top homology at tiny scale, by enumerating
//! all complexes on the free simplices.
//!
//! `beta_d > 0` is monotone in the complex, and it first becomes true the
//! moment an inserted boundary column is dependent on the earlier ones; the
//! walk therefore prunes an entire subtree (whose weights sum to the node
//! weight) as soon as a dependency appears.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::EchelonStack;
use crate::simplex::{simplex_count, unrank_simplex, SimplexRank};

fn facet_columns(n: usize, d: usize) -> Vec<Vec<u64>> {
    let words = simplex_count(n, d - 1).div_ceil(64) as usize;
    (0..simplex_count(n, d))
        .map(|r| {
            let s = unrank_simplex(SimplexRank(r), n, d).expect("rank in range");
            let mut col = vec![0u64; words];
            for (face, _) in s.facet_ranks() {
                col[face.0 as usize / 64] |= 1 << (face.0 as usize % 64);
            }
            col
        })
        .collect()
}

/// Exact `Prob(beta_d(Y_(n,p,d); GF2) > 0)` in floating point.
pub fn exact_prob_top_nonzero(n: usize, d: usize, p: f64, cap: usize) -> Result<f64> {
    check(n, d, p, cap)?;
    let columns = facet_columns(n, d);
    let mut acc = 0.0f64;
    let mut stack = EchelonStack::new();
    dfs_f64(&mut stack, &columns, 0, 1.0, p, &mut acc);
    Ok(acc)
}

fn dfs_f64(
    stack: &mut EchelonStack,
    columns: &[Vec<u64>],
    idx: usize,
    weight: f64,
    p: f64,
    acc: &mut f64,
) {
    if idx == columns.len() {
        return;
    }
    let wq = weight * (1.0 - p);
    if wq > 0.0 {
        dfs_f64(stack, columns, idx + 1, wq, p, acc);
    }
    let wp = weight * p;
    if wp <= 0.0 {
        return;
    }
    if stack.push(&columns[idx]) {
        dfs_f64(stack, columns, idx + 1, wp, p, acc);
        stack.pop();
    } else {
        *acc += wp;
    }
}

/// Exact rational version for `p` given as a fraction.
pub fn exact_prob_top_nonzero_rational(
    n: usize,
    d: usize,
    p: &BigRational,
    cap: usize,
) -> Result<BigRational> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::InvalidParams(format!("p = {p} not in [0, 1]")));
    }
    check(n, d, p.to_f64().unwrap_or(0.5), cap)?;
    let columns = facet_columns(n, d);
    let q = BigRational::one() - p;
    let mut acc = BigRational::zero();
    let mut stack = EchelonStack::new();
    dfs_rational(&mut stack, &columns, 0, BigRational::one(), p, &q, &mut acc);
    Ok(acc)
}

fn dfs_rational(
    stack: &mut EchelonStack,
    columns: &[Vec<u64>],
    idx: usize,
    weight: BigRational,
    p: &BigRational,
    q: &BigRational,
    acc: &mut BigRational,
) {
    if idx == columns.len() {
        return;
    }
    let wq = &weight * q;
    if !wq.is_zero() {
        dfs_rational(stack, columns, idx + 1, wq, p, q, acc);
    }
    let wp = weight * p;
    if wp.is_zero() {
        return;
    }
    if stack.push(&columns[idx]) {
        dfs_rational(stack, columns, idx + 1, wp, p, q, acc);
        stack.pop();
    } else {
        *acc += wp;
    }
}

fn check(n: usize, d: usize, p: f64, cap: usize) -> Result<()> {
    if d < 1 || n < d + 1 {
        return Err(Error::InvalidParams(format!("bad (n, d) = ({n}, {d})")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p = {p} not in [0, 1]")));
    }
    let total = simplex_count(n, d) as usize;
    if total > cap {
        return Err(Error::CapExceeded { needed: total, cap });
    }
    Ok(())
}

/// Parses "a/b" or a decimal into a rational, for exact-mode inputs.
pub fn parse_probability_rational(text: &str) -> Result<BigRational> {
    let bad = |msg: String| Error::InvalidParams(msg);
    if let Some((a, b)) = text.split_once('/') {
        let numer: BigInt = a
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad numerator in {text:?}")))?;
        let denom: BigInt = b
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad denominator in {text:?}")))?;
        if denom.is_zero() {
            return Err(bad("zero denominator".into()));
        }
        return Ok(BigRational::new(numer, denom));
    }
    // decimal: shift the point into a power of ten
    let t = text.trim();
    let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| bad(format!("bad probability {text:?}")))?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(numer, denom))
}
