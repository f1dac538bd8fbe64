//! Dense matrices over a prime field GF(q), q < 2^31. Plain 64-bit modular
//! arithmetic; no Montgomery form needed at desk scale.

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, exact for all q < 2^32.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if q == small {
            return true;
        }
        if q % small == 0 {
            return false;
        }
    }
    let mut d = q - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // bases 2, 3, 5, 7 are exact below 3,215,031,751
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = mod_pow(a, d, q);
        if x == 1 || x == q - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, q);
            if x == q - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod prime `q` by Fermat.
fn mod_inv(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    mod_pow(a, q - 2, q)
}

#[derive(Clone, PartialEq, Eq)]
pub struct GFpMatrix {
    rows: usize,
    cols: usize,
    q: u64,
    entries: Vec<u64>,
}

impl GFpMatrix {
    pub fn new(rows: usize, cols: usize, q: u64) -> Result<Self> {
        if q >= 1 << 31 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self {
            rows,
            cols,
            q,
            entries: vec![0; rows * cols],
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    /// Stores a signed value reduced mod q.
    #[inline]
    pub fn set_signed(&mut self, r: usize, c: usize, value: i64) {
        let q = self.q as i64;
        self.entries[r * self.cols + c] = value.rem_euclid(q) as u64;
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.entries[r * self.cols + c] = value % self.q;
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mat_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + mul_mod(self.get(r, c), x[c] % self.q, self.q)) % self.q;
                }
                acc
            })
            .collect()
    }

    /// Rank via Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// In-place RREF; returns (row, pivot column) pairs.
    fn rref(&mut self) -> Vec<(usize, usize)> {
        let q = self.q;
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for c in 0..self.cols {
                self.entries.swap(pivot_row * self.cols + c, r * self.cols + c);
            }
            let inv = mod_inv(self.get(pivot_row, col), q);
            for c in col..self.cols {
                let v = mul_mod(self.get(pivot_row, c), inv, q);
                self.entries[pivot_row * self.cols + c] = v;
            }
            for r2 in 0..self.rows {
                if r2 == pivot_row {
                    continue;
                }
                let factor = self.get(r2, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let sub = mul_mod(factor, self.get(pivot_row, c), q);
                    let v = (self.get(r2, c) + q - sub) % q;
                    self.entries[r2 * self.cols + c] = v;
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        pivots
    }

    /// Basis of the right kernel; size `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let q = self.q;
        let mut pivot_of_col = vec![usize::MAX; self.cols];
        for &(r, c) in &pivots {
            pivot_of_col[c] = r;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free] != usize::MAX {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for &(r, c) in &pivots {
                let coeff = m.get(r, free);
                if coeff != 0 {
                    v[c] = q - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M x = target`; `None` when the target is outside the column span.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(target.len(), self.rows, "dimension mismatch");
        let mut aug = GFpMatrix {
            rows: self.rows,
            cols: self.cols + 1,
            q: self.q,
            entries: vec![0; self.rows * (self.cols + 1)],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.entries[r * aug.cols + c] = self.get(r, c);
            }
            aug.entries[r * aug.cols + self.cols] = target[r] % self.q;
        }
        let pivots = aug.rref();
        let mut x = vec![0u64; self.cols];
        for &(r, c) in &pivots {
            if c == self.cols {
                return None;
            }
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn in_column_span(&self, target: &[u64]) -> bool {
        self.solve(target).is_some()
    }
}

impl std::fmt::Debug for GFpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GFpMatrix {}x{} mod {}", self.rows, self.cols, self.q)?;
        for r in 0..self.rows.min(16) {
            for c in 0..self.cols.min(24) {
                write!(f, "{:3}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Streaming GF(q) rank, mirroring [`Gf2RankAccumulator`]: vectors are
/// reduced against an echelon basis keyed by leading index.
///
/// [`Gf2RankAccumulator`]: super::Gf2RankAccumulator
pub struct GfpRankAccumulator {
    width: usize,
    q: u64,
    /// basis[p] = vector normalized to leading coefficient 1 at index p
    basis: Vec<Option<Vec<u64>>>,
    rank: usize,
    cap: Option<usize>,
}

impl GfpRankAccumulator {
    pub fn new(width: usize, q: u64) -> Result<Self> {
        if q >= 1 << 31 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self {
            width,
            q,
            basis: vec![None; width],
            rank: 0,
            cap: None,
        })
    }

    pub fn with_cap(width: usize, q: u64, cap: usize) -> Result<Self> {
        let mut a = Self::new(width, q)?;
        a.cap = Some(cap);
        Ok(a)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn saturated(&self) -> bool {
        self.cap.is_some_and(|c| self.rank >= c) || self.rank >= self.width
    }

    pub fn insert(&mut self, vec: &mut [u64]) -> bool {
        debug_assert_eq!(vec.len(), self.width);
        if self.saturated() {
            return false;
        }
        let q = self.q;
        let mut lead = 0;
        loop {
            while lead < self.width && vec[lead] == 0 {
                lead += 1;
            }
            if lead == self.width {
                return false;
            }
            match &self.basis[lead] {
                Some(b) => {
                    let factor = vec[lead];
                    for (dst, src) in vec[lead..].iter_mut().zip(&b[lead..]) {
                        *dst = (*dst + q - mul_mod(factor, *src, q)) % q;
                    }
                }
                None => {
                    let inv = mod_inv(vec[lead], q);
                    let mut stored = vec![0u64; self.width];
                    for (dst, src) in stored[lead..].iter_mut().zip(&vec[lead..]) {
                        *dst = mul_mod(*src, inv, q);
                    }
                    self.basis[lead] = Some(stored);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }
}
