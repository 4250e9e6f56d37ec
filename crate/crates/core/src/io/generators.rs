//! Deterministic synthetic matrices for model validation.
//!
//! Every generator is a pure function of its parameters and `seed`.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::matrix::CooMatrix;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn value(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// Worst case for chunk occupancy: `n_chunks * C` rows where the first row
/// of every chunk is fully populated and the other `C - 1` rows hold a
/// single entry.
pub fn gen_worst_case(n_chunks: usize, chunk_height: usize, seed: u64) -> Result<CooMatrix> {
    if n_chunks == 0 || chunk_height < 2 {
        return Err(param("worst-case matrix needs n_chunks >= 1 and C >= 2"));
    }
    let n = n_chunks * chunk_height;
    let mut rng = rng(seed);
    let mut m = CooMatrix::new(n, n);
    m.entries.reserve(n_chunks * (n + chunk_height - 1));
    for row in 0..n {
        if row % chunk_height == 0 {
            for col in 0..n {
                m.push(row, col, value(&mut rng));
            }
        } else {
            let col = rng.gen_range(0..n);
            m.push(row, col, value(&mut rng));
        }
    }
    Ok(m)
}

pub fn gen_dense(n: usize, seed: u64) -> Result<CooMatrix> {
    if n == 0 {
        return Err(param("dense matrix needs n >= 1"));
    }
    let mut rng = rng(seed);
    let mut m = CooMatrix::new(n, n);
    m.entries.reserve(n * n);
    for row in 0..n {
        for col in 0..n {
            m.push(row, col, value(&mut rng));
        }
    }
    Ok(m)
}

/// Band of half-width `half_bw` around the diagonal; each off-diagonal band
/// entry is kept with probability `fill`, the diagonal always.
pub fn gen_banded(n: usize, half_bw: usize, fill: f64, seed: u64) -> Result<CooMatrix> {
    if n == 0 || !(fill > 0.0 && fill <= 1.0) {
        return Err(param("banded matrix needs n >= 1 and fill in (0, 1]"));
    }
    let mut rng = rng(seed);
    let mut m = CooMatrix::new(n, n);
    m.entries.reserve(n * (2 * half_bw + 1));
    for row in 0..n {
        let lo = row.saturating_sub(half_bw);
        let hi = (row + half_bw).min(n - 1);
        for col in lo..=hi {
            if col == row || fill >= 1.0 || rng.gen_bool(fill) {
                m.push(row, col, value(&mut rng));
            }
        }
    }
    Ok(m)
}

/// `n x n` with `base_len` random entries per row, except `spike_count`
/// evenly spaced rows holding `spike_len` entries.
pub fn gen_skewed(
    n: usize,
    base_len: usize,
    spike_len: usize,
    spike_count: usize,
    seed: u64,
) -> Result<CooMatrix> {
    if n == 0 || base_len > n || spike_len > n || spike_count > n {
        return Err(param(
            "skewed matrix needs row lengths and spike count <= n",
        ));
    }
    let mut rng = rng(seed);
    let mut m = CooMatrix::new(n, n);
    let stride = n.checked_div(spike_count).unwrap_or(usize::MAX);
    for row in 0..n {
        let is_spike = spike_count > 0 && row % stride == 0 && row / stride < spike_count;
        let len = if is_spike { spike_len } else { base_len };
        push_random_row(&mut m, &mut rng, row, len);
    }
    Ok(m)
}

/// Random `n_rows x n_cols` matrix whose row lengths are uniform in
/// `0..=max_row_len`.
pub fn gen_random(
    n_rows: usize,
    n_cols: usize,
    max_row_len: usize,
    seed: u64,
) -> Result<CooMatrix> {
    if max_row_len > n_cols {
        return Err(param("row length cannot exceed the column count"));
    }
    let mut rng = rng(seed);
    let mut m = CooMatrix::new(n_rows, n_cols);
    for row in 0..n_rows {
        let len = rng.gen_range(0..=max_row_len);
        push_random_row(&mut m, &mut rng, row, len);
    }
    Ok(m)
}

fn push_random_row(m: &mut CooMatrix, rng: &mut ChaCha8Rng, row: usize, len: usize) {
    if len == m.n_cols {
        for col in 0..len {
            let v = value(rng);
            m.push(row, col, v);
        }
        return;
    }
    let mut cols = index::sample(rng, m.n_cols, len).into_vec();
    cols.sort_unstable();
    for col in cols {
        let v = value(rng);
        m.push(row, col, v);
    }
}
