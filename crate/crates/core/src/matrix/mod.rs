//! Sparse matrix representations and conversions.

pub mod coo;
pub mod crs;
pub mod perm;
pub mod sell;
pub mod stats;

pub use coo::{CooMatrix, Triplet};
pub use crs::CrsMatrix;
pub use perm::{permute_vector, unpermute_vector};
pub use sell::{SellConfig, SellMatrix};
pub use stats::{compute_stats, MatrixStats};

use crate::error::Result;

/// Canonical COO: sorted by (row, col), duplicates summed.
pub fn canonicalize_coo(m: CooMatrix) -> Result<CooMatrix> {
    m.canonicalize()
}

pub fn coo_to_crs(m: CooMatrix) -> Result<CrsMatrix> {
    CrsMatrix::from_coo(m)
}

pub fn crs_to_sell(m: &CrsMatrix, cfg: SellConfig) -> Result<SellMatrix> {
    SellMatrix::from_crs(m, cfg)
}

pub fn sell_to_ellpack(m: &CrsMatrix) -> Result<SellMatrix> {
    SellMatrix::ellpack(m)
}
