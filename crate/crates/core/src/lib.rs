//! SELL-C-σ sparse matrix storage, SpMV kernels and roofline modeling.
//!
//! Matrices enter as [`CooMatrix`] (from Matrix Market files or the
//! generators in [`io`]), are compressed to [`CrsMatrix`] and converted to
//! [`SellMatrix`] with a [`SellConfig`]. [`kernels`] multiplies them and
//! [`model`] predicts how fast that should be.

pub mod cli;
pub mod error;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod model;

pub use error::{Error, Result};
pub use matrix::{
    compute_stats, CooMatrix, CrsMatrix, MatrixStats, SellConfig, SellMatrix, Triplet,
};
