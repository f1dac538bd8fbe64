//! Random simplicial `d`-complexes with full `(d-1)`-skeleton: sampling,
//! top-dimensional homology over GF(2)/GF(q)/Z, and the Monte Carlo and
//! exact-enumeration experiments around the `p = w/n` threshold for the top
//! homology group.

pub mod bits;
pub mod error;
pub mod experiments;
pub mod homology;
pub mod linalg;
pub mod model;
pub mod rho;
pub mod rng;
pub mod simplex;
pub mod snf;
pub mod stats;

pub use error::{Error, Result};
pub use homology::{CoefficientSpec, HomologyReport};
pub use model::{ComplexSample, ModelParams, SamplerKind};
pub use simplex::{Simplex, SimplexRank};
