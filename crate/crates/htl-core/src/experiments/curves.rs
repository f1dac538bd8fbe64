//! Closed-form curves: Bell numbers and the dimension-specific upper bound
//! on the probability of nonvanishing top homology in the sparse regime.

use crate::error::{Error, Result};

/// Number of set partitions of a `k`-element set, via the Bell triangle.
/// Overflow-checked: the largest representable value is `bell_number(25)`.
pub fn bell_number(k: usize) -> Result<u64> {
    if k == 0 {
        return Ok(1);
    }
    // B_k is the last entry of triangle row k-1; stopping there keeps every
    // intermediate value <= B_k
    let mut row = vec![1u64];
    for _ in 0..k - 1 {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let prev = *next.last().unwrap();
            next.push(
                prev.checked_add(v)
                    .ok_or(Error::Overflow("bell number"))?,
            );
        }
        row = next;
    }
    Ok(*row.last().unwrap())
}

/// Upper bound on `Prob(beta_d > 0)` at `p = w/n`, valid in `0 < w < 1`:
///
/// * d = 1: `w^3 / (1 - w)`
/// * d = 2: `18 w^4 / (1 - w)^2` (the sharper two-dimensional constant)
/// * d >= 3: `c w^(d+2) / (1 - w)^d` with `c = (d+1)^d d! part(d+1)`
///
/// Returns `None` outside `(0, 1)`, where the bound is vacuous. Values above
/// 1 are returned raw; clamping is a display concern.
pub fn bound_curve(d: usize, w: f64) -> Option<f64> {
    if !(w > 0.0 && w < 1.0) {
        return None;
    }
    match d {
        0 => None,
        1 => Some(w.powi(3) / (1.0 - w)),
        2 => Some(18.0 * w.powi(4) / (1.0 - w).powi(2)),
        _ => {
            let parts = bell_number(d + 1).ok()? as f64;
            let factorial: f64 = (1..=d as u64).map(|k| k as f64).product();
            let c = (d as f64 + 1.0).powi(d as i32) * factorial * parts;
            Some(c * w.powi(d as i32 + 2) / (1.0 - w).powi(d as i32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_values() {
        // against the enumeration oracle below for small k, plus fixed points
        assert_eq!(bell_number(0).unwrap(), 1);
        assert_eq!(bell_number(1).unwrap(), 1);
        for k in 1..=6 {
            assert_eq!(bell_number(k).unwrap(), count_partitions(k), "k = {k}");
        }
        assert_eq!(bell_number(25).unwrap(), 4_638_590_332_229_999_353);
        assert!(bell_number(26).is_err());
    }

    /// Brute-force partition count: assign each element the smallest unused
    /// block label or an existing one (restricted growth strings).
    fn count_partitions(k: usize) -> u64 {
        fn go(assigned: &mut Vec<usize>, k: usize) -> u64 {
            if assigned.len() == k {
                return 1;
            }
            let max = assigned.iter().copied().max().map_or(0, |m| m + 1);
            let mut total = 0;
            for label in 0..=max {
                assigned.push(label);
                total += go(assigned, k);
                assigned.pop();
            }
            total
        }
        go(&mut Vec::new(), k)
    }

    #[test]
    fn bound_examples() {
        let b = bound_curve(1, 0.5).unwrap();
        assert!((b - 0.25).abs() < 1e-12);
        let b = bound_curve(2, 0.3).unwrap();
        assert!((b - 18.0 * 0.3f64.powi(4) / 0.49).abs() < 1e-9);
        // c = 4^3 * 3! * 15 = 5760 at d = 3
        let b = bound_curve(3, 0.1).unwrap();
        assert!((b - 5760.0 * 0.1f64.powi(5) / 0.9f64.powi(3)).abs() < 1e-12);
        assert!(bound_curve(2, 1.0).is_none());
        assert!(bound_curve(2, 0.0).is_none());
        assert!(bound_curve(2, -0.5).is_none());
    }
}
