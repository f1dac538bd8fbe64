use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertices must be strictly ascending without duplicates")]
    NonAscendingVertices,

    #[error("a simplex needs at least one vertex")]
    EmptySimplex,

    #[error("rank {rank} out of range: there are {count} simplices of dimension {dim} on {n} vertices")]
    RankOutOfRange {
        rank: u64,
        count: u64,
        dim: usize,
        n: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("enumeration over {needed} free simplices exceeds the cap of {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("binomial C({n}, {k}) does not fit the supported range")]
    BinomialOverflow { n: usize, k: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("w = {0} is out of range (requires w < 1)")]
    WOutOfRange(f64),

    #[error("overflow computing {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
