//! Simplices of the full simplex on `n` vertices: canonical representation,
//! colexicographic ranking/unranking, facet enumeration with signs.
//!
//! All vertex indices are 0-based. A `k`-simplex is a strictly ascending
//! `(k+1)`-subset of `[0, n)`, and its rank is the colexicographic index
//! `sum_i C(v_i, i+1)` over its vertices `v_0 < ... < v_k`. Colex ranks do
//! not depend on `n`, so growing `n` keeps every existing rank stable.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest vertex count covered by the binomial table.
pub const MAX_N: usize = 4096;
/// Largest subset size covered by the binomial table.
pub const MAX_K: usize = 16;

const OVERFLOW: u64 = u64::MAX;

fn pascal_table() -> &'static [[u64; MAX_K + 1]] {
    static TABLE: OnceLock<Vec<[u64; MAX_K + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![[0u64; MAX_K + 1]; MAX_N + 1];
        for n in 0..=MAX_N {
            t[n][0] = 1;
            for k in 1..=MAX_K.min(n) {
                let above = t[n - 1][k];
                let left = t[n - 1][k - 1];
                t[n][k] = if above == OVERFLOW || left == OVERFLOW {
                    OVERFLOW
                } else {
                    above.checked_add(left).unwrap_or(OVERFLOW)
                };
            }
        }
        t
    })
}

/// `C(n, k)` from the precomputed table. Returns `None` when the value does
/// not fit in `u64` or falls outside the table bounds.
pub fn try_binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    if n > MAX_N || k > MAX_K {
        return None;
    }
    match pascal_table()[n][k] {
        OVERFLOW => None,
        v => Some(v),
    }
}

/// `C(n, k)`; panics if the value is out of the supported range.
pub fn binomial(n: usize, k: usize) -> u64 {
    try_binomial(n, k)
        .unwrap_or_else(|| panic!("C({n}, {k}) out of supported range (n <= {MAX_N}, k <= {MAX_K}, value < 2^64)"))
}

/// Number of `k`-simplices on `n` vertices, i.e. `C(n, k+1)`.
pub fn simplex_count(n: usize, k: usize) -> u64 {
    binomial(n, k + 1)
}

/// Colexicographic rank of a simplex among all simplices of its dimension.
///
/// The `(n, k)` context travels with the structures that hold ranks; the
/// rank value itself is independent of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexRank(pub u64);

impl std::fmt::Display for SimplexRank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl From<SimplexRank> for u64 {
    fn from(r: SimplexRank) -> u64 {
        r.0
    }
}

/// A simplex: strictly ascending 0-based vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// Builds a simplex, validating that vertices are strictly ascending.
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::NonAscendingVertices);
        }
        Ok(Self { vertices })
    }

    /// Builds a simplex from vertices in any order, sorting them first.
    /// Duplicates are still an error.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Largest vertex index; handy for range checks against `n`.
    pub fn max_vertex(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Facets with orientation signs: deleting the `i`-th smallest vertex
    /// yields the facet with sign `(-1)^i`. A vertex has no facets and
    /// returns the empty list; the homology engine handles augmentation
    /// explicitly.
    pub fn boundary_faces(&self) -> Vec<(Simplex, i32)> {
        if self.dimension() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut v = self.vertices.clone();
                v.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                (Simplex { vertices: v }, sign)
            })
            .collect()
    }

    /// Ranks of all facets together with their signs, without materializing
    /// the facet simplices. Equivalent to ranking each entry of
    /// [`boundary_faces`](Self::boundary_faces); used in matrix-building
    /// loops.
    pub fn facet_ranks(&self) -> Vec<(SimplexRank, i32)> {
        let k = self.vertices.len();
        if k == 1 {
            return Vec::new();
        }
        // Facet i omits vertex v_i: rank = sum_{j<i} C(v_j, j+1) + sum_{j>i} C(v_j, j).
        let mut prefix = vec![0u64; k + 1];
        for (j, &v) in self.vertices.iter().enumerate() {
            prefix[j + 1] = prefix[j] + binomial(v, j + 1);
        }
        let mut suffix = vec![0u64; k + 1];
        for j in (0..k).rev() {
            suffix[j] = suffix[j + 1] + binomial(self.vertices[j], j);
        }
        (0..k)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                (SimplexRank(prefix[i] + suffix[i + 1]), sign)
            })
            .collect()
    }
}

impl std::fmt::Display for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Colexicographic rank of `s` among the simplices of its dimension on `n`
/// vertices.
pub fn rank_simplex(s: &Simplex, n: usize) -> Result<SimplexRank> {
    if s.max_vertex() >= n {
        return Err(Error::VertexOutOfRange {
            vertex: s.max_vertex(),
            n,
        });
    }
    let mut rank = 0u64;
    for (i, &v) in s.vertices().iter().enumerate() {
        rank += binomial(v, i + 1);
    }
    Ok(SimplexRank(rank))
}

/// Inverse of [`rank_simplex`]: the `k`-simplex on `n` vertices with the
/// given colex rank.
pub fn unrank_simplex(rank: SimplexRank, n: usize, k: usize) -> Result<Simplex> {
    let count = simplex_count(n, k);
    if rank.0 >= count {
        return Err(Error::RankOutOfRange {
            rank: rank.0,
            count,
            dim: k,
            n,
        });
    }
    let mut r = rank.0;
    let mut vertices = vec![0usize; k + 1];
    let mut upper = n;
    for i in (0..=k).rev() {
        // Largest v with C(v, i+1) <= r; v < upper keeps vertices descending.
        let mut v = upper - 1;
        while binomial(v, i + 1) > r {
            v -= 1;
        }
        vertices[i] = v;
        r -= binomial(v, i + 1);
        upper = v;
    }
    Ok(Simplex { vertices })
}

/// Iterator over all `k`-simplices on `n` vertices in colex order. The
/// `i`-th yield has rank `i`.
pub fn enumerate_simplices(n: usize, k: usize) -> Result<SimplexIter> {
    if k + 1 > n {
        return Err(Error::InvalidParams(format!(
            "cannot enumerate {k}-simplices on {n} vertices"
        )));
    }
    Ok(SimplexIter {
        n,
        current: Some((0..=k).collect()),
    })
}

pub struct SimplexIter {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for SimplexIter {
    type Item = Simplex;

    fn next(&mut self) -> Option<Simplex> {
        let cur = self.current.as_mut()?;
        let out = Simplex {
            vertices: cur.clone(),
        };
        // Colex successor: bump the first vertex that has room before its
        // successor, resetting everything below it to 0..i-1.
        let k = cur.len();
        let mut i = 0;
        loop {
            if i == k {
                self.current = None;
                break;
            }
            let limit = if i + 1 < k { cur[i + 1] } else { self.n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}
