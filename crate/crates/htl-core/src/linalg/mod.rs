//! Finite-field linear algebra: bit-packed GF(2), dense GF(q), boundary
//! matrices of samples, and streaming rank accumulators.

mod bitmatrix;
mod boundary;
mod gfp;

pub(crate) use bitmatrix::EchelonStack;
pub use bitmatrix::{BitMatrix, Gf2RankAccumulator};
pub use boundary::{boundary_matrix_gf2, boundary_matrix_gfp, boundary_rows};
pub use gfp::{is_prime, GFpMatrix, GfpRankAccumulator};
