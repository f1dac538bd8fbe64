//! Executable form of the analytic machinery behind the threshold proof:
//! gated triples, the exact and Monte Carlo "bounding probability" rho and
//! its rim variant, the closed-form upper bound, rim counts, and cofacet
//! constellations with their partition bookkeeping.
//!
//! `rho(sigma, S, lambda)` is the probability that a sampled complex both
//! avoids every d-simplex in `S` and contains `sigma` in its boundary
//! space over GF(2). The exact evaluator enumerates all complexes on the
//! free simplices, pruning whole subtrees once `sigma` is covered (span
//! membership is monotone in the complex).

use std::collections::HashMap;

use crate::bits::Bitset;
use crate::error::{Error, Result};
use crate::linalg::{EchelonStack, Gf2RankAccumulator};
use crate::model::{sample, ComplexSample, ModelParams};
use crate::rng::derive_stream;
use crate::simplex::{simplex_count, unrank_simplex, Simplex, SimplexRank};
use crate::stats::wilson_interval;

/// Default cap on the number of free simplices an exact enumeration will
/// accept (2^22 subsets, about 4M).
pub const DEFAULT_ENUM_CAP: usize = 22;

/// A chain over GF(2): the support of its nonzero coefficients, indexed by
/// colex rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Chain {
    n: usize,
    dim: usize,
    support: Bitset,
}

impl Gf2Chain {
    pub fn zero(n: usize, dim: usize) -> Self {
        Self {
            n,
            dim,
            support: Bitset::new(simplex_count(n, dim) as usize),
        }
    }

    pub fn from_support(n: usize, dim: usize, support: Bitset) -> Result<Self> {
        if support.len() != simplex_count(n, dim) as usize {
            return Err(Error::DimensionMismatch(format!(
                "support length {} != C({n}, {}) for dimension {dim}",
                support.len(),
                dim + 1
            )));
        }
        Ok(Self { n, dim, support })
    }

    pub fn from_simplices<I>(n: usize, dim: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut support = Bitset::new(simplex_count(n, dim) as usize);
        for s in simplices {
            if s.dimension() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "expected dimension {dim}, got {}",
                    s.dimension()
                )));
            }
            let r = crate::simplex::rank_simplex(&s, n)?;
            support.flip(r.0 as usize); // GF(2): repeated simplices cancel
        }
        Ok(Self { n, dim, support })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &Bitset {
        &self.support
    }

    pub fn support_size(&self) -> u64 {
        self.support.count_ones() as u64
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_zero()
    }

    /// Parses the chain file format: header `n k`, one `k`-simplex per line
    /// as ascending vertex indices, `#` comments; duplicate lines are an
    /// error. Same shape as the complex format but any `k >= 0` is allowed.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (header_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line \"n k\"".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let (n, dim): (usize, usize) = match parts.as_slice() {
            [a, b] => match (a.parse(), b.parse()) {
                (Ok(n), Ok(k)) => (n, k),
                _ => {
                    return Err(Error::Parse {
                        line: header_no,
                        msg: "header must be \"n k\"".into(),
                    })
                }
            },
            _ => {
                return Err(Error::Parse {
                    line: header_no,
                    msg: "header must be exactly \"n k\"".into(),
                })
            }
        };
        if n < dim + 1 {
            return Err(Error::Parse {
                line: header_no,
                msg: format!("invalid header: n = {n}, k = {dim}"),
            });
        }
        let mut support = Bitset::new(simplex_count(n, dim) as usize);
        for (line_no, line) in lines {
            let vertices: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(|t| t.parse()).collect();
            let vertices = vertices.map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid vertex in {line:?}"),
            })?;
            if vertices.len() != dim + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} vertices, got {}", dim + 1, vertices.len()),
                });
            }
            let s = Simplex::new(vertices).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let r = crate::simplex::rank_simplex(&s, n).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if support.get(r.0 as usize) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate simplex {s}"),
                });
            }
            support.set(r.0 as usize, true);
        }
        Ok(Self { n, dim, support })
    }

    /// Boundary chain; requires `dim >= 1`.
    pub fn boundary(&self) -> Gf2Chain {
        assert!(self.dim >= 1, "boundary() needs dimension >= 1");
        let mut out = Bitset::new(simplex_count(self.n, self.dim - 1) as usize);
        for idx in self.support.iter_ones() {
            let s = unrank_simplex(SimplexRank(idx as u64), self.n, self.dim)
                .expect("support rank in range");
            for (face, _) in s.facet_ranks() {
                out.flip(face.0 as usize);
            }
        }
        Gf2Chain {
            n: self.n,
            dim: self.dim - 1,
            support: out,
        }
    }

    /// Whether the boundary vanishes. For a 0-chain the boundary lives in
    /// the augmentation: it vanishes iff the support has even size.
    pub fn boundary_is_zero(&self) -> bool {
        if self.dim == 0 {
            self.support.count_ones() % 2 == 0
        } else {
            self.boundary().is_zero()
        }
    }
}

/// A gated query `(sigma, S, lambda)`: a `(d-1)`-chain over GF(2), a set of
/// forbidden d-simplices, and the gate level.
#[derive(Debug, Clone)]
pub struct RhoQuery {
    pub params: ModelParams,
    pub sigma: Gf2Chain,
    pub forbidden: Bitset,
    pub lambda: u32,
}

impl RhoQuery {
    pub fn new(params: ModelParams, sigma: Gf2Chain, forbidden: Bitset, lambda: u32) -> Result<Self> {
        let (n, d) = (params.n(), params.d());
        if sigma.n() != n || sigma.dim() + 1 != d {
            return Err(Error::DimensionMismatch(format!(
                "sigma must be a (d-1)-chain on n = {n}; got dimension {} on n = {}",
                sigma.dim(),
                sigma.n()
            )));
        }
        if forbidden.len() != params.num_top_simplices() as usize {
            return Err(Error::DimensionMismatch(format!(
                "forbidden set length {} != C({n}, {})",
                forbidden.len(),
                d + 1
            )));
        }
        Ok(Self {
            params,
            sigma,
            forbidden,
            lambda,
        })
    }

    /// Gate: `|supp sigma| > (lambda - 1)(d + 1)`.
    pub fn sigma_member(&self) -> bool {
        let lhs = self.sigma.support_size() as i64;
        let rhs = (self.lambda as i64 - 1) * (self.params.d() as i64 + 1);
        lhs > rhs
    }
}

/// The rim variant `(T, S, lambda)`: a set of d-simplices in place of the
/// chain.
#[derive(Debug, Clone)]
pub struct RimQuery {
    pub t: Bitset,
    pub forbidden: Bitset,
    pub lambda: u32,
}

impl RimQuery {
    pub fn new(params: &ModelParams, t: Bitset, forbidden: Bitset, lambda: u32) -> Result<Self> {
        let m = params.num_top_simplices() as usize;
        if t.len() != m || forbidden.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "T and S must be sets over the {m} d-simplex ranks"
            )));
        }
        Ok(Self {
            t,
            forbidden,
            lambda,
        })
    }

    /// Gate: `r(T) > (lambda - 1)(d + 1)`.
    pub fn sigma_member(&self, params: &ModelParams) -> bool {
        let lhs = rim_count(
            self.t.iter_ones().map(|i| SimplexRank(i as u64)),
            params.n(),
            params.d(),
        ) as i64;
        let rhs = (self.lambda as i64 - 1) * (params.d() as i64 + 1);
        lhs > rhs
    }
}

/// Number of `(d-1)`-simplices covered by exactly one member of `T`
/// (the "rim" of the set).
pub fn rim_count<I>(t: I, n: usize, d: usize) -> u64
where
    I: IntoIterator<Item = SimplexRank>,
{
    let mut cover: HashMap<u64, u32> = HashMap::new();
    for rank in t {
        let s = unrank_simplex(rank, n, d).expect("rank in range");
        for (face, _) in s.facet_ranks() {
            *cover.entry(face.0).or_insert(0) += 1;
        }
    }
    cover.values().filter(|&&c| c == 1).count() as u64
}

/// Monte Carlo estimate with a Wilson 95% interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RhoEstimate {
    fn from_counts(hits: u64, trials: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(hits, trials);
        Self {
            hits,
            trials,
            estimate: hits as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }
}

/// Greedy-reduction state for the subset walk: an echelon basis keyed by
/// lowest set bit plus the running reduction of the target chain. The
/// target stays greedily reduced, so "covered" is a zero test, and once
/// covered it stays covered for the whole subtree.
struct SpanWalk {
    basis: EchelonStack,
    target: Vec<u64>,
}

impl SpanWalk {
    fn new(target: Vec<u64>) -> Self {
        Self {
            basis: EchelonStack::new(),
            target,
        }
    }

    fn target_covered(&self) -> bool {
        self.target.iter().all(|&w| w == 0)
    }

    /// Adds a column. Returns the undo record: whether a basis vector was
    /// pushed, and the previous target if the target changed.
    fn include(&mut self, col: &[u64]) -> (bool, Option<Vec<u64>>) {
        if !self.basis.push(col) {
            return (false, None);
        }
        // keep the target greedily reduced against the grown basis
        let mut saved = None;
        loop {
            let Some(low) = EchelonStack::lowest(&self.target) else {
                break;
            };
            let Some(b) = self.basis.find(low) else {
                break;
            };
            if saved.is_none() {
                saved = Some(self.target.clone());
            }
            let b = b.to_vec();
            for (dst, src) in self.target.iter_mut().zip(&b) {
                *dst ^= src;
            }
        }
        (true, saved)
    }

    fn undo(&mut self, record: (bool, Option<Vec<u64>>)) {
        if let Some(t) = record.1 {
            self.target = t;
        }
        if record.0 {
            self.basis.pop();
        }
    }
}

/// `sum over D subseteq columns of [target in span(D)] p^|D| (1-p)^(#cols - |D|)`.
/// Prunes a whole subtree (its weights sum to the node weight) as soon as
/// the target is covered, which also makes the zero target cost O(1).
fn span_probability(target: Vec<u64>, columns: &[Vec<u64>], p: f64) -> f64 {
    fn dfs(walk: &mut SpanWalk, columns: &[Vec<u64>], idx: usize, weight: f64, p: f64, acc: &mut f64) {
        if walk.target_covered() {
            *acc += weight;
            return;
        }
        if idx == columns.len() {
            return;
        }
        dfs(walk, columns, idx + 1, weight * (1.0 - p), p, acc);
        if p > 0.0 {
            let record = walk.include(&columns[idx]);
            dfs(walk, columns, idx + 1, weight * p, p, acc);
            walk.undo(record);
        }
    }
    let mut acc = 0.0;
    let mut walk = SpanWalk::new(target);
    dfs(&mut walk, columns, 0, 1.0, p, &mut acc);
    acc
}

fn facet_column(rank: SimplexRank, n: usize, d: usize, words: usize) -> Vec<u64> {
    let s = unrank_simplex(rank, n, d).expect("rank in range");
    let mut col = vec![0u64; words];
    for (face, _) in s.facet_ranks() {
        col[face.0 as usize / 64] |= 1 << (face.0 as usize % 64);
    }
    col
}

fn free_ranks(total: u64, forbidden: &Bitset) -> Vec<SimplexRank> {
    (0..total)
        .filter(|&r| !forbidden.get(r as usize))
        .map(SimplexRank)
        .collect()
}

/// Exact `rho(sigma, S, lambda)` by enumeration over complexes on the free
/// simplices. `lambda` gates nothing here: the probability is independent
/// of it.
pub fn rho_exact(q: &RhoQuery, cap: usize) -> Result<f64> {
    let (n, d, p) = (q.params.n(), q.params.d(), q.params.p());
    let total = q.params.num_top_simplices();
    let free = free_ranks(total, &q.forbidden);
    if free.len() > cap {
        return Err(Error::CapExceeded {
            needed: free.len(),
            cap,
        });
    }
    // boundaries are cycles: a non-cycle sigma is never covered
    if !q.sigma.boundary_is_zero() {
        return Ok(0.0);
    }
    let s_size = (total as usize) - free.len();
    let avoid_s = (1.0 - p).powi(s_size as i32);
    let words = q.sigma.support().words().len();
    let columns: Vec<Vec<u64>> = free
        .iter()
        .map(|&r| facet_column(r, n, d, words))
        .collect();
    let target = q.sigma.support().words().to_vec();
    Ok(avoid_s * span_probability(target, &columns, p))
}

/// Monte Carlo `rho(sigma, S, lambda)`.
pub fn rho_estimate(q: &RhoQuery, trials: u64, seed: u64) -> RhoEstimate {
    let hits = (0..trials)
        .filter(|&t| {
            let delta = sample(&q.params, seed, t);
            rho_event_holds(q, &delta)
        })
        .count() as u64;
    RhoEstimate::from_counts(hits, trials)
}

/// The two defining conditions against a concrete sample: the complex
/// avoids `S`, and `sigma` lies in the span of the present boundaries.
pub fn rho_event_holds(q: &RhoQuery, delta: &ComplexSample) -> bool {
    if delta.present().intersects(&q.forbidden) {
        return false;
    }
    let (n, d) = (q.params.n(), q.params.d());
    let width = simplex_count(n, d - 1) as usize;
    let mut acc = Gf2RankAccumulator::new(width);
    let words = width.div_ceil(64);
    for r in delta.present_ranks() {
        let mut col = facet_column(r, n, d, words);
        acc.insert(&mut col);
    }
    acc.in_span(q.sigma.support().words())
}

/// Exact rim-variant probability: the complex avoids `S` and the boundary
/// of `sum T` lies in the span of the boundaries of `Delta(d) \ T` — that
/// is, some cycle of the full simplex has support squeezed between `T` and
/// `T union Delta(d)`, realized over GF(2).
pub fn rho_tilde_exact(q: &RimQuery, params: &ModelParams, cap: usize) -> Result<f64> {
    let (n, d, p) = (params.n(), params.d(), params.p());
    let total = params.num_top_simplices();
    if q.t.len() != total as usize || q.forbidden.len() != total as usize {
        return Err(Error::DimensionMismatch(
            "T and S must be sets over the d-simplex ranks".into(),
        ));
    }
    let free = free_ranks(total, &q.forbidden);
    if free.len() > cap {
        return Err(Error::CapExceeded {
            needed: free.len(),
            cap,
        });
    }
    let s_size = (total as usize) - free.len();
    let avoid_s = (1.0 - p).powi(s_size as i32);
    let words = simplex_count(n, d - 1).div_ceil(64) as usize;
    let target = rim_target(q, n, d, words);
    // free simplices inside T never contribute a column; their inclusion or
    // exclusion is irrelevant to both conditions, so they integrate out to
    // a factor of 1 and are dropped from the walk
    let columns: Vec<Vec<u64>> = free
        .iter()
        .filter(|r| !q.t.get(r.0 as usize))
        .map(|&r| facet_column(r, n, d, words))
        .collect();
    Ok(avoid_s * span_probability(target, &columns, p))
}

/// Monte Carlo rim-variant probability.
pub fn rho_tilde_estimate(
    q: &RimQuery,
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> RhoEstimate {
    let (n, d) = (params.n(), params.d());
    let words = simplex_count(n, d - 1).div_ceil(64) as usize;
    let target = rim_target(q, n, d, words);
    let width = simplex_count(n, d - 1) as usize;
    let hits = (0..trials)
        .filter(|&t| {
            let delta = sample(params, derive_stream(seed, 0), t);
            if delta.present().intersects(&q.forbidden) {
                return false;
            }
            let mut acc = Gf2RankAccumulator::new(width);
            for r in delta.present_ranks() {
                if q.t.get(r.0 as usize) {
                    continue;
                }
                let mut col = facet_column(r, n, d, words);
                acc.insert(&mut col);
            }
            acc.in_span(&target)
        })
        .count() as u64;
    RhoEstimate::from_counts(hits, trials)
}

/// Boundary support of `sum_{t in T} t` as packed words.
fn rim_target(q: &RimQuery, n: usize, d: usize, words: usize) -> Vec<u64> {
    let mut target = vec![0u64; words];
    for idx in q.t.iter_ones() {
        let col = facet_column(SimplexRank(idx as u64), n, d, words);
        for (dst, src) in target.iter_mut().zip(&col) {
            *dst ^= src;
        }
    }
    target
}

/// Closed-form upper bound `(d+1)^lambda lambda! p^lambda / (1-w)^lambda`,
/// valid for `w < 1` (stated for d >= 2; still evaluable at d = 1).
pub fn rho_bound(d: usize, lambda: u32, p: f64, w: f64) -> Result<f64> {
    if !(w < 1.0) {
        return Err(Error::WOutOfRange(w));
    }
    let factorial: f64 = (1..=lambda as u64).map(|k| k as f64).product();
    let base = (d as f64 + 1.0) * p / (1.0 - w);
    Ok(factorial * base.powi(lambda as i32))
}

/// The cofacet configuration: a base d-simplex `t0`, one cofacet per facet
/// (sharing facet `e_i`, with apex `v_i` outside `t0`), and the partition
/// of the facet indices by equal apex.
#[derive(Debug, Clone)]
pub struct Constellation {
    t0: Simplex,
    cofacets: Vec<Simplex>,
    apexes: Vec<usize>,
    /// level sets of i -> v_i, ordered by first occurrence
    blocks: Vec<Vec<usize>>,
}

impl Constellation {
    pub fn t0(&self) -> &Simplex {
        &self.t0
    }

    pub fn cofacets(&self) -> &[Simplex] {
        &self.cofacets
    }

    pub fn apexes(&self) -> &[usize] {
        &self.apexes
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `m` of the apex partition.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The d-chain `t0 + t_1 + ... + t_{d+1}` over GF(2).
    pub fn chain(&self, n: usize) -> Result<Gf2Chain> {
        let d = self.t0.dimension();
        let mut all = vec![self.t0.clone()];
        all.extend(self.cofacets.iter().cloned());
        Gf2Chain::from_simplices(n, d, all)
    }

    /// Ranks of `{t0, t_1, ..., t_{d+1}}`.
    pub fn simplex_ranks(&self, n: usize) -> Result<Vec<SimplexRank>> {
        let mut out = vec![crate::simplex::rank_simplex(&self.t0, n)?];
        for t in &self.cofacets {
            out.push(crate::simplex::rank_simplex(t, n)?);
        }
        Ok(out)
    }
}

/// Builds the constellation over `t0` from an apex choice: cofacet `t_i`
/// glues apex `apexes[i]` onto the `i`-th facet of `t0`.
pub fn generate_constellation(
    n: usize,
    d: usize,
    t0: &Simplex,
    apexes: &[usize],
) -> Result<Constellation> {
    if t0.dimension() != d {
        return Err(Error::DimensionMismatch(format!(
            "t0 must be a {d}-simplex, got dimension {}",
            t0.dimension()
        )));
    }
    if t0.max_vertex() >= n {
        return Err(Error::VertexOutOfRange {
            vertex: t0.max_vertex(),
            n,
        });
    }
    if apexes.len() != d + 1 {
        return Err(Error::InvalidParams(format!(
            "need exactly d+1 = {} apexes, got {}",
            d + 1,
            apexes.len()
        )));
    }
    let faces = t0.boundary_faces();
    let mut cofacets = Vec::with_capacity(d + 1);
    for (i, &v) in apexes.iter().enumerate() {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if t0.contains_vertex(v) {
            return Err(Error::InvalidParams(format!(
                "apex {v} lies inside t0 = {t0}"
            )));
        }
        let mut verts = faces[i].0.vertices().to_vec();
        verts.push(v);
        cofacets.push(Simplex::from_unsorted(verts)?);
    }
    let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &v) in apexes.iter().enumerate() {
        match blocks.iter_mut().find(|(apex, _)| *apex == v) {
            Some((_, block)) => block.push(i),
            None => blocks.push((v, vec![i])),
        }
    }
    Ok(Constellation {
        t0: t0.clone(),
        cofacets,
        apexes: apexes.to_vec(),
        blocks: blocks.into_iter().map(|(_, b)| b).collect(),
    })
}
