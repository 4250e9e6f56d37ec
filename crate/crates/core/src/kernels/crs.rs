use rayon::prelude::*;

use super::{check_dims, Executor, Schedule};
use crate::error::Result;
use crate::matrix::CrsMatrix;

/// `y (+)= A x` row by row.
pub fn spmv_crs(m: &CrsMatrix, x: &[f64], y: &mut [f64], accumulate: bool) -> Result<()> {
    check_dims(x, y, m.n_cols, m.n_rows)?;
    rows(m, x, y, 0, accumulate, false);
    Ok(())
}

/// Same contract as [`spmv_crs`], with the inner loop unrolled four ways
/// into independent partial sums that are combined once per row; leftover
/// entries go through a scalar remainder loop.
pub fn spmv_crs_unrolled(m: &CrsMatrix, x: &[f64], y: &mut [f64], accumulate: bool) -> Result<()> {
    check_dims(x, y, m.n_cols, m.n_rows)?;
    rows(m, x, y, 0, accumulate, true);
    Ok(())
}

pub(super) fn par_spmv_crs(
    m: &CrsMatrix,
    x: &[f64],
    y: &mut [f64],
    accumulate: bool,
    unrolled: bool,
    exec: &Executor,
) -> Result<()> {
    check_dims(x, y, m.n_cols, m.n_rows)?;
    let Some(pool) = exec.pool() else {
        rows(m, x, y, 0, accumulate, unrolled);
        return Ok(());
    };
    pool.install(|| match exec.schedule() {
        Schedule::Static => {
            let block = m.n_rows.div_ceil(exec.threads()).max(1);
            y.par_chunks_mut(block)
                .enumerate()
                .for_each(|(b, yb)| rows(m, x, yb, b * block, accumulate, unrolled));
        }
        Schedule::Guided1 => {
            y.par_iter_mut()
                .enumerate()
                .with_max_len(1)
                .for_each(|(i, yi)| rows(m, x, std::slice::from_mut(yi), i, accumulate, unrolled));
        }
    });
    Ok(())
}

/// Computes rows `first..first + y.len()` into `y`.
#[inline]
fn rows(m: &CrsMatrix, x: &[f64], y: &mut [f64], first: usize, accumulate: bool, unrolled: bool) {
    for (k, yi) in y.iter_mut().enumerate() {
        let (cols, vals) = m.row(first + k);
        let init = if accumulate { *yi } else { 0.0 };
        *yi = if unrolled {
            row_unrolled(cols, vals, x, init)
        } else {
            row_plain(cols, vals, x, init)
        };
    }
}

#[inline]
fn row_plain(cols: &[u32], vals: &[f64], x: &[f64], mut sum: f64) -> f64 {
    for (&c, &v) in cols.iter().zip(vals) {
        sum += v * x[c as usize];
    }
    sum
}

#[inline]
fn row_unrolled(cols: &[u32], vals: &[f64], x: &[f64], mut sum: f64) -> f64 {
    let mut tmp = [0.0f64; 4];
    let col_blocks = cols.chunks_exact(4);
    let val_blocks = vals.chunks_exact(4);
    let (col_rem, val_rem) = (col_blocks.remainder(), val_blocks.remainder());
    for (c, v) in col_blocks.zip(val_blocks) {
        tmp[0] += v[0] * x[c[0] as usize];
        tmp[1] += v[1] * x[c[1] as usize];
        tmp[2] += v[2] * x[c[2] as usize];
        tmp[3] += v[3] * x[c[3] as usize];
    }
    if cols.len() >= 4 {
        sum += tmp[0] + tmp[1] + tmp[2] + tmp[3];
    }
    // remainder loop
    for (&c, &v) in col_rem.iter().zip(val_rem) {
        sum += v * x[c as usize];
    }
    sum
}
