//! SpMV kernels for CRS and SELL-C-σ, their parallel execution and a timing
//! harness.
//!
//! Each output row is produced by exactly one worker in a fixed summation
//! order, so results are bitwise reproducible for any thread count or
//! schedule.

mod bench;
mod crs;
mod schedule;
mod sell;

pub use bench::{bench_spmv, SpmvRun};
pub use crs::{spmv_crs, spmv_crs_unrolled};
pub use schedule::{choose_scheduling, Executor, Schedule, ZETA_THRESHOLD};
pub use sell::spmv_sell;

use crate::error::{param, Result};
use crate::matrix::{CrsMatrix, SellMatrix};

/// A matrix paired with the kernel that multiplies it.
#[derive(Debug, Clone, Copy)]
pub enum Kernel<'a> {
    Crs(&'a CrsMatrix),
    CrsUnrolled(&'a CrsMatrix),
    Sell(&'a SellMatrix),
}

impl Kernel<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Crs(_) => "crs",
            Kernel::CrsUnrolled(_) => "crs-unrolled",
            Kernel::Sell(_) => "sell",
        }
    }

    pub fn nnz(&self) -> usize {
        match self {
            Kernel::Crs(m) | Kernel::CrsUnrolled(m) => m.nnz(),
            Kernel::Sell(m) => m.nnz(),
        }
    }

    pub fn x_len(&self) -> usize {
        match self {
            Kernel::Crs(m) | Kernel::CrsUnrolled(m) => m.n_cols,
            Kernel::Sell(m) => m.n_cols(),
        }
    }

    /// Length of the output vector; padded for SELL.
    pub fn y_len(&self) -> usize {
        match self {
            Kernel::Crs(m) | Kernel::CrsUnrolled(m) => m.n_rows,
            Kernel::Sell(m) => m.n_rows_padded(),
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64], accumulate: bool, exec: &Executor) -> Result<()> {
        match *self {
            Kernel::Crs(m) => crs::par_spmv_crs(m, x, y, accumulate, false, exec),
            Kernel::CrsUnrolled(m) => crs::par_spmv_crs(m, x, y, accumulate, true, exec),
            Kernel::Sell(m) => sell::par_spmv_sell(m, x, y, accumulate, exec),
        }
    }

    /// Maps a stored-order output back to original row order.
    pub fn output_to_original(&self, y: &[f64]) -> Result<Vec<f64>> {
        match self {
            Kernel::Crs(_) | Kernel::CrsUnrolled(_) => Ok(y.to_vec()),
            Kernel::Sell(m) => m.unpermute_rows(y),
        }
    }
}

pub(crate) fn check_dims(x: &[f64], y: &[f64], x_len: usize, y_len: usize) -> Result<()> {
    if x.len() != x_len {
        return Err(param(format!("x has length {}, expected {x_len}", x.len())));
    }
    if y.len() != y_len {
        return Err(param(format!("y has length {}, expected {y_len}", y.len())));
    }
    Ok(())
}
