use rayon::prelude::*;

use super::{check_dims, Executor, Schedule};
use crate::error::Result;
use crate::matrix::SellMatrix;

/// `y (+)= A x` in stored (permuted) row space.
///
/// `x` has length `n_cols` (in permuted column space when the matrix was
/// built with column permutation) and `y` has length `n_rows_padded`.
/// Each chunk column updates all `C` rows of the chunk at once; padding
/// slots multiply `0.0` by `x[0]`.
pub fn spmv_sell(m: &SellMatrix, x: &[f64], y: &mut [f64], accumulate: bool) -> Result<()> {
    check_dims(x, y, m.n_cols(), m.n_rows_padded())?;
    chunks(m, x, y, 0, accumulate);
    Ok(())
}

pub(super) fn par_spmv_sell(
    m: &SellMatrix,
    x: &[f64],
    y: &mut [f64],
    accumulate: bool,
    exec: &Executor,
) -> Result<()> {
    check_dims(x, y, m.n_cols(), m.n_rows_padded())?;
    let Some(pool) = exec.pool() else {
        chunks(m, x, y, 0, accumulate);
        return Ok(());
    };
    let c = m.chunk_height();
    pool.install(|| match exec.schedule() {
        Schedule::Static => {
            let block = m.n_chunks().div_ceil(exec.threads()).max(1);
            y.par_chunks_mut(block * c)
                .enumerate()
                .for_each(|(b, yb)| chunks(m, x, yb, b * block, accumulate));
        }
        Schedule::Guided1 => {
            y.par_chunks_mut(c)
                .enumerate()
                .with_max_len(1)
                .for_each(|(i, yc)| chunks(m, x, yc, i, accumulate));
        }
    });
    Ok(())
}

/// Computes chunks starting at `first` into `y`, whose length is a multiple
/// of `C`.
fn chunks(m: &SellMatrix, x: &[f64], y: &mut [f64], first: usize, accumulate: bool) {
    let c = m.chunk_height();
    let (cs, col, val) = (m.cs(), m.col(), m.val());
    for (k, yc) in y.chunks_exact_mut(c).enumerate() {
        let i = first + k;
        let range = cs[i]..cs[i + 1];
        let (ccol, cval) = (&col[range.clone()], &val[range]);
        match c {
            1 => chunk_fixed::<1>(ccol, cval, x, yc, accumulate),
            2 => chunk_fixed::<2>(ccol, cval, x, yc, accumulate),
            4 => chunk_fixed::<4>(ccol, cval, x, yc, accumulate),
            8 => chunk_fixed::<8>(ccol, cval, x, yc, accumulate),
            16 => chunk_fixed::<16>(ccol, cval, x, yc, accumulate),
            32 => chunk_fixed::<32>(ccol, cval, x, yc, accumulate),
            _ => chunk_any(ccol, cval, x, yc, accumulate),
        }
    }
}

#[inline(always)]
fn chunk_fixed<const C: usize>(
    col: &[u32],
    val: &[f64],
    x: &[f64],
    y: &mut [f64],
    accumulate: bool,
) {
    let mut acc = [0.0f64; C];
    if accumulate {
        acc.copy_from_slice(y);
    }
    for (cc, vv) in col.chunks_exact(C).zip(val.chunks_exact(C)) {
        for r in 0..C {
            acc[r] += vv[r] * x[cc[r] as usize];
        }
    }
    y.copy_from_slice(&acc);
}

fn chunk_any(col: &[u32], val: &[f64], x: &[f64], y: &mut [f64], accumulate: bool) {
    let c = y.len();
    if !accumulate {
        y.fill(0.0);
    }
    for (cc, vv) in col.chunks_exact(c).zip(val.chunks_exact(c)) {
        for r in 0..c {
            y[r] += vv[r] * x[cc[r] as usize];
        }
    }
}
