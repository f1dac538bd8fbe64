//! The random model: `d`-complexes on `n` vertices with full `(d-1)`-skeleton,
//! each `d`-simplex present independently with probability `p`.
//!
//! Only the top layer is stored: the lower skeleton is always full, so a
//! sample is a bitset over the colex ranks of the `d`-simplices.

use crate::bits::Bitset;
use crate::error::{Error, Result};
use crate::rng::{derive_stream, stream_rng};
use crate::simplex::{rank_simplex, simplex_count, unrank_simplex, Simplex, SimplexRank};
use rand::Rng;
use serde::Serialize;

/// Bernoulli draws are replaced by geometric skips below this `p`; both
/// samplers draw from the same distribution (tested), not the same stream.
pub const GEOMETRIC_SKIP_THRESHOLD: f64 = 1.0 / 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: usize,
    d: usize,
    p: f64,
}

impl ModelParams {
    pub fn new(n: usize, d: usize, p: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        if n < d + 1 {
            return Err(Error::InvalidParams(format!(
                "n = {n} is too small for dimension d = {d} (need n >= d+1)"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("p = {p} not in [0, 1]")));
        }
        Ok(Self { n, d, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `w = p * n`, derived on the fly and never stored.
    pub fn w(&self) -> f64 {
        self.p * self.n as f64
    }

    /// `C(n, d+1)`, the number of potential top simplices.
    pub fn num_top_simplices(&self) -> u64 {
        simplex_count(self.n, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Bernoulli,
    GeometricSkip,
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplerKind::Bernoulli => write!(f, "bernoulli"),
            SamplerKind::GeometricSkip => write!(f, "geometric-skip"),
        }
    }
}

/// Where a sample came from: a seeded draw, or explicit data (file, test fixture).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SampleOrigin {
    Sampled {
        p: f64,
        master_seed: u64,
        trial: u64,
        sampler: SamplerKind,
    },
    Explicit,
}

/// One draw from the model: parameters plus the set of present `d`-simplices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSample {
    n: usize,
    d: usize,
    present: Bitset,
    origin: SampleOrigin,
}

impl ComplexSample {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn origin(&self) -> &SampleOrigin {
        &self.origin
    }

    /// Present `d`-simplices as a bitset over colex ranks.
    pub fn present(&self) -> &Bitset {
        &self.present
    }

    /// `|Delta(d)|`: number of present top simplices.
    pub fn num_present(&self) -> u64 {
        self.present.count_ones() as u64
    }

    pub fn contains(&self, rank: SimplexRank) -> bool {
        self.present.get(rank.0 as usize)
    }

    /// Ranks of present simplices, ascending.
    pub fn present_ranks(&self) -> impl Iterator<Item = SimplexRank> + '_ {
        self.present.iter_ones().map(|i| SimplexRank(i as u64))
    }

    /// Builds a sample with an explicit top layer.
    pub fn from_simplices<I>(n: usize, d: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut present = Bitset::new(simplex_count(n, d) as usize);
        for s in simplices {
            if s.dimension() != d {
                return Err(Error::DimensionMismatch(format!(
                    "expected a {d}-simplex, got dimension {}",
                    s.dimension()
                )));
            }
            let r = rank_simplex(&s, n)?.0 as usize;
            if present.get(r) {
                return Err(Error::InvalidParams(format!("duplicate simplex {s}")));
            }
            present.set(r, true);
        }
        Ok(Self {
            n,
            d,
            present,
            origin: SampleOrigin::Explicit,
        })
    }

    /// Copy with one extra simplex present; rank must not already be set.
    pub fn with_added(&self, rank: SimplexRank) -> Self {
        let mut out = self.clone();
        debug_assert!(!out.present.get(rank.0 as usize));
        out.present.set(rank.0 as usize, true);
        out.origin = SampleOrigin::Explicit;
        out
    }

    /// Serializes to the complex file format: header `n d`, one simplex per
    /// line as ascending vertex indices, `#` comments allowed.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n, self.d));
        for r in self.present_ranks() {
            let s = unrank_simplex(r, self.n, self.d).expect("rank in range");
            let line: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the complex file format. Errors carry 1-based line numbers.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header line \"n d\"".into(),
        })?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse {
                line: header_no,
                msg: "header must be \"n d\"".into(),
            })?;
        let d: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse {
                line: header_no,
                msg: "header must be \"n d\"".into(),
            })?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: header_no,
                msg: "header must be exactly \"n d\"".into(),
            });
        }
        if d < 1 || n < d + 1 {
            return Err(Error::Parse {
                line: header_no,
                msg: format!("invalid header: n = {n}, d = {d}"),
            });
        }

        let mut present = Bitset::new(simplex_count(n, d) as usize);
        for (line_no, line) in lines {
            let mut vertices = Vec::with_capacity(d + 1);
            for tok in line.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid vertex index {tok:?}"),
                })?;
                vertices.push(v);
            }
            if vertices.len() != d + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} vertices, got {}", d + 1, vertices.len()),
                });
            }
            let s = Simplex::new(vertices).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let r = rank_simplex(&s, n).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if present.get(r.0 as usize) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("duplicate simplex {s}"),
                });
            }
            present.set(r.0 as usize, true);
        }
        Ok(Self {
            n,
            d,
            present,
            origin: SampleOrigin::Explicit,
        })
    }
}

/// Draws one sample. Deterministic: the stream is
/// `chacha8(splitmix64-derive(master_seed, trial))`, so trials can be
/// generated in any order or in parallel.
pub fn sample(params: &ModelParams, master_seed: u64, trial: u64) -> ComplexSample {
    let kind = if params.p > 0.0 && params.p < GEOMETRIC_SKIP_THRESHOLD {
        SamplerKind::GeometricSkip
    } else {
        SamplerKind::Bernoulli
    };
    sample_with(params, master_seed, trial, kind)
}

/// Draws one sample with a forced sampler variant. Both variants draw the
/// same distribution; streams differ.
pub fn sample_with(
    params: &ModelParams,
    master_seed: u64,
    trial: u64,
    sampler: SamplerKind,
) -> ComplexSample {
    let m = params.num_top_simplices() as usize;
    let mut present = Bitset::new(m);
    let mut rng = stream_rng(derive_stream(master_seed, trial));
    let p = params.p;
    match sampler {
        SamplerKind::Bernoulli => {
            for i in 0..m {
                if rng.random::<f64>() < p {
                    present.set(i, true);
                }
            }
        }
        SamplerKind::GeometricSkip => {
            // Skip lengths are Geometric(p): k failures before a success has
            // probability (1-p)^k p; inverse transform on u in (0, 1].
            if p > 0.0 {
                let log_q = (1.0 - p).ln();
                let mut pos = 0usize;
                loop {
                    let u = 1.0 - rng.random::<f64>(); // in (0, 1]
                    let skip = (u.ln() / log_q).floor();
                    if skip >= (m - pos) as f64 {
                        break;
                    }
                    pos += skip as usize;
                    present.set(pos, true);
                    pos += 1;
                    if pos >= m {
                        break;
                    }
                }
            }
        }
    }
    ComplexSample {
        n: params.n(),
        d: params.d(),
        present,
        origin: SampleOrigin::Sampled {
            p,
            master_seed,
            trial,
            sampler,
        },
    }
}
