//! Exact and randomized counting of weighted k-matchings.
//!
//! The number (or total weight) of k-matchings of a bipartite graph with
//! biadjacency matrix `B` is `perm_k B`, the sum of all k×k subpermanents.
//! Padding `B` with all-ones blocks gives a square matrix `B_k` whose single
//! permanent equals `(m-k)!(n-k)! perm_k B`. The same trick with a symmetric
//! adjacency matrix `A` turns `haf_k A` into one hafnian. This crate provides
//! those constructions together with exact kernels, brute-force enumeration,
//! matching polynomials and Monte Carlo estimators built on top of them.

pub mod approx;
pub mod cli;
pub mod enumerate;
mod error;
pub mod exact;
pub mod matrix;
pub mod number;
pub mod polynomial;
pub mod reduction;
pub mod subset;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, NonnegMatrix, SkewMatrix, SymZeroDiagMatrix};
pub use number::{factorial, ExactNumber};
pub use subset::{enumerate_subsets, IndexSubset};
