//! Oracles and random inputs shared by the integration tests.
#![allow(dead_code)]

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sellkit::io::mtx::write_matrix_market_to;
use sellkit::{CooMatrix, SellMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix with a per-matrix row-length profile: uniform, a few long
/// rows among short ones, or nearly constant.
pub fn random_coo(rng: &mut ChaCha8Rng, n_rows: usize, n_cols: usize) -> CooMatrix {
    let mut m = CooMatrix::new(n_rows, n_cols);
    let profile = rng.gen_range(0..3);
    let cap = rng.gen_range(1..=n_cols.clamp(1, 64));
    for row in 0..n_rows {
        let len = match profile {
            0 => rng.gen_range(0..=cap),
            1 if rng.gen_bool(0.05) => rng.gen_range(0..=n_cols),
            1 => rng.gen_range(0..=cap.min(3)),
            _ => cap - rng.gen_range(0..=cap.min(1)),
        }
        .min(n_cols);
        for col in index::sample(rng, n_cols, len) {
            m.push(row, col, rng.gen_range(-2.0..2.0));
        }
    }
    m
}

/// `y = A x` through a dense copy of the triplets, summing in column order.
pub fn dense_matvec(coo: &CooMatrix, x: &[f64]) -> Vec<f64> {
    let mut dense = vec![0.0; coo.n_rows * coo.n_cols];
    for t in &coo.entries {
        dense[t.row as usize * coo.n_cols + t.col as usize] += t.val;
    }
    (0..coo.n_rows)
        .map(|i| {
            dense[i * coo.n_cols..(i + 1) * coo.n_cols]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

/// `‖y - y_ref‖∞ / ‖y_ref‖∞`, or the absolute difference when `y_ref` is zero.
pub fn rel_err(y: &[f64], y_ref: &[f64]) -> f64 {
    let diff = y
        .iter()
        .zip(y_ref)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = y_ref.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Chunk occupancy straight from the definition: sorted row lengths per
/// scope, chunk maxima, padding rows included.
pub fn beta_oracle(row_lengths: &[usize], c: usize, sigma: usize) -> f64 {
    let n_pad = row_lengths.len().div_ceil(c) * c;
    let mut lens = row_lengths.to_vec();
    lens.resize(n_pad, 0);
    if sigma > 1 {
        for scope in lens.chunks_mut(sigma) {
            scope.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let slots: usize = lens
        .chunks(c)
        .map(|ch| c * ch.iter().max().copied().unwrap_or(0))
        .sum();
    let nnz: usize = row_lengths.iter().sum();
    if slots == 0 {
        1.0
    } else {
        nnz as f64 / slots as f64
    }
}

/// Every stored field, values as bit patterns.
pub fn sell_fingerprint(m: &SellMatrix) -> String {
    let bits: Vec<u64> = m.val().iter().map(|v| v.to_bits()).collect();
    format!(
        "{} {} {} {} {} {:?} {:?} {:?} {:?} {:?} {:?} {:?} {}",
        m.n_rows(),
        m.n_cols(),
        m.chunk_height(),
        m.sigma(),
        m.n_rows_padded(),
        m.cs(),
        m.cl(),
        m.col(),
        bits,
        m.perm(),
        m.inv_perm(),
        m.row_lengths(),
        m.col_permuted()
    )
}

pub fn mtx_text(coo: &CooMatrix) -> String {
    let mut out = Vec::new();
    write_matrix_market_to(coo, &mut out).unwrap();
    String::from_utf8(out).unwrap()
}
