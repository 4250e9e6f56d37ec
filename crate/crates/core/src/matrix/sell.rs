//! SELL-C-σ: sliced ELLPACK with chunk height `C` and sorting scope `σ`.
//!
//! Rows are grouped into chunks of `C` consecutive stored rows. Each chunk is
//! zero-padded to the length of its longest row and stored column-major, so
//! slot `j` of stored row `r` lives at `cs[r / C] + j * C + r % C`. Before
//! chunking, rows are sorted by descending length inside windows of `σ`
//! consecutive rows; rows never leave their window.
//!
//! `SELL-1-1` stores exactly the CRS arrays and `SELL-N-1` is ELLPACK.

use std::cmp::Reverse;

use rayon::prelude::*;

use super::coo::{CooMatrix, Triplet};
use super::crs::CrsMatrix;
use super::perm;
use crate::error::{param, structural, Result};

/// Bytes per stored value and per column index.
pub const VALUE_BYTES: usize = 8;
pub const INDEX_BYTES: usize = 4;

/// Build parameters for [`SellMatrix::from_crs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SellConfig {
    /// Rows per chunk (`C`).
    pub chunk_height: usize,
    /// Sorting scope in rows (`σ`). `1` disables sorting.
    pub sigma: usize,
    /// Each chunk's `C * cl * min(value, index bytes)` is rounded up to a
    /// multiple of this. `1` disables alignment padding.
    pub align_bytes: usize,
    /// Renumber columns through the row permutation (square matrices only).
    pub permute_cols: bool,
}

impl SellConfig {
    pub fn new(chunk_height: usize, sigma: usize) -> Self {
        Self {
            chunk_height,
            sigma,
            align_bytes: 1,
            permute_cols: false,
        }
    }

    pub fn align_bytes(mut self, align_bytes: usize) -> Self {
        self.align_bytes = align_bytes;
        self
    }

    pub fn permute_cols(mut self, permute_cols: bool) -> Self {
        self.permute_cols = permute_cols;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (c, sigma) = (self.chunk_height, self.sigma);
        if c == 0 {
            return Err(param("chunk height C must be at least 1"));
        }
        if sigma == 0 {
            return Err(param("sorting scope sigma must be at least 1"));
        }
        if sigma > 1 && sigma % c != 0 && c % sigma != 0 {
            return Err(param(format!(
                "sorting scope sigma={sigma} must be a multiple of C={c} (or divide it)"
            )));
        }
        if !self.align_bytes.is_power_of_two() {
            return Err(param(format!(
                "align_bytes={} must be a power of two",
                self.align_bytes
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SellMatrix {
    n_rows: usize,
    n_cols: usize,
    chunk_height: usize,
    sigma: usize,
    n_rows_padded: usize,
    cs: Vec<usize>,
    cl: Vec<u32>,
    col: Vec<u32>,
    val: Vec<f64>,
    perm: Vec<u32>,
    inv_perm: Vec<u32>,
    /// Actual length of every stored row (padding rows included, as 0).
    row_len: Vec<u32>,
    col_permuted: bool,
}

impl SellMatrix {
    pub fn from_crs(m: &CrsMatrix, cfg: SellConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.permute_cols && !m.is_square() {
            return Err(param(format!(
                "column permutation requires a square matrix, got {}x{}",
                m.n_rows, m.n_cols
            )));
        }
        let c = cfg.chunk_height;
        let n_rows_padded = m.n_rows.div_ceil(c) * c;
        let n_chunks = n_rows_padded / c;

        // stored position -> original row; padding rows get indices >= n_rows
        let mut order: Vec<u32> = (0..n_rows_padded as u32).collect();
        let len_of = |r: u32| {
            if (r as usize) < m.n_rows {
                m.row_len(r as usize)
            } else {
                0
            }
        };
        if cfg.sigma > 1 {
            // stable sort keeps ties in ascending original order
            order
                .par_chunks_mut(cfg.sigma)
                .for_each(|scope| scope.sort_by_key(|&r| Reverse(len_of(r))));
        }
        let row_len: Vec<u32> = order.iter().map(|&r| len_of(r) as u32).collect();
        let inv_perm: Vec<u32> = order[..m.n_rows].to_vec();
        let perm = perm::invert(&inv_perm);

        let align_step = alignment_step(c, cfg.align_bytes);
        let cl: Vec<u32> = row_len
            .chunks(c)
            .map(|chunk| {
                let max = chunk.iter().copied().max().unwrap_or(0) as usize;
                (max.div_ceil(align_step) * align_step) as u32
            })
            .collect();
        let mut cs = Vec::with_capacity(n_chunks + 1);
        cs.push(0usize);
        for &l in &cl {
            cs.push(cs.last().unwrap() + c * l as usize);
        }

        let total = cs[n_chunks];
        let mut col = vec![0u32; total];
        let mut val = vec![0.0f64; total];
        // chunks are disjoint ranges of col/val
        let col_slices = split_by_offsets(&mut col, &cs);
        let val_slices = split_by_offsets(&mut val, &cs);
        col_slices
            .into_par_iter()
            .zip(val_slices)
            .enumerate()
            .for_each(|(i, (ccol, cval))| {
                for lane in 0..c {
                    let orig = order[i * c + lane] as usize;
                    if orig >= m.n_rows {
                        continue;
                    }
                    let (rc, rv) = m.row(orig);
                    for (j, (&cidx, &v)) in rc.iter().zip(rv).enumerate() {
                        let slot = j * c + lane;
                        ccol[slot] = if cfg.permute_cols {
                            perm[cidx as usize]
                        } else {
                            cidx
                        };
                        cval[slot] = v;
                    }
                }
            });

        Ok(Self {
            n_rows: m.n_rows,
            n_cols: m.n_cols,
            chunk_height: c,
            sigma: cfg.sigma,
            n_rows_padded,
            cs,
            cl,
            col,
            val,
            perm,
            inv_perm,
            row_len,
            col_permuted: cfg.permute_cols,
        })
    }

    /// ELLPACK: a single chunk spanning all rows, no sorting.
    pub fn ellpack(m: &CrsMatrix) -> Result<Self> {
        Self::from_crs(m, SellConfig::new(m.n_rows.max(1), 1))
    }

    /// Reassembles a matrix from its stored arrays, checking all layout
    /// invariants. `row_len` is indexed by stored row.
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw_parts(
        n_rows: usize,
        n_cols: usize,
        chunk_height: usize,
        sigma: usize,
        n_rows_padded: usize,
        cs: Vec<usize>,
        cl: Vec<u32>,
        col: Vec<u32>,
        val: Vec<f64>,
        perm: Vec<u32>,
        row_len: Vec<u32>,
        col_permuted: bool,
    ) -> Result<Self> {
        let c = chunk_height;
        if c == 0 || sigma == 0 {
            return Err(structural("chunk height and sigma must be positive"));
        }
        if !n_rows_padded.is_multiple_of(c) || n_rows_padded < n_rows || n_rows_padded - n_rows >= c
        {
            return Err(structural(format!(
                "padded row count {n_rows_padded} inconsistent with n_rows={n_rows}, C={c}"
            )));
        }
        let n_chunks = n_rows_padded / c;
        if cl.len() != n_chunks || cs.len() != n_chunks + 1 || cs[0] != 0 {
            return Err(structural("chunk offset/length arrays have wrong size"));
        }
        for i in 0..n_chunks {
            if cs[i + 1] != cs[i] + c * cl[i] as usize {
                return Err(structural(format!("cs[{}] != cs[{i}] + C*cl[{i}]", i + 1)));
            }
        }
        if col.len() != cs[n_chunks] || val.len() != cs[n_chunks] {
            return Err(structural("col/val length does not match cs[n_chunks]"));
        }
        if perm.len() != n_rows || !perm::is_permutation(&perm) {
            return Err(structural("perm is not a permutation of the rows"));
        }
        if row_len.len() != n_rows_padded {
            return Err(structural("row length array has wrong size"));
        }
        for (s, &l) in row_len.iter().enumerate() {
            if l > cl[s / c] || (s >= n_rows && l != 0) {
                return Err(structural(format!(
                    "stored row {s} length {l} exceeds its chunk"
                )));
            }
        }
        if col.iter().any(|&x| x as usize >= n_cols.max(1)) {
            return Err(structural("column index out of range"));
        }
        if col_permuted && n_rows != n_cols {
            return Err(structural("column permutation on a non-square matrix"));
        }
        let inv_perm = perm::invert(&perm);
        Ok(Self {
            n_rows,
            n_cols,
            chunk_height,
            sigma,
            n_rows_padded,
            cs,
            cl,
            col,
            val,
            perm,
            inv_perm,
            row_len,
            col_permuted,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }
    pub fn chunk_height(&self) -> usize {
        self.chunk_height
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn n_rows_padded(&self) -> usize {
        self.n_rows_padded
    }
    pub fn n_chunks(&self) -> usize {
        self.cl.len()
    }
    /// Chunk start offsets, length `n_chunks + 1`.
    pub fn cs(&self) -> &[usize] {
        &self.cs
    }
    /// Chunk widths.
    pub fn cl(&self) -> &[u32] {
        &self.cl
    }
    pub fn col(&self) -> &[u32] {
        &self.col
    }
    pub fn val(&self) -> &[f64] {
        &self.val
    }
    /// Original row -> stored row.
    pub fn perm(&self) -> &[u32] {
        &self.perm
    }
    /// Stored row -> original row.
    pub fn inv_perm(&self) -> &[u32] {
        &self.inv_perm
    }
    /// Length of each stored row, padding rows included.
    pub fn row_lengths(&self) -> &[u32] {
        &self.row_len
    }
    pub fn col_permuted(&self) -> bool {
        self.col_permuted
    }

    pub fn nnz(&self) -> usize {
        self.row_len.iter().map(|&l| l as usize).sum()
    }

    /// Total number of stored slots, real and padding.
    pub fn storage_slots(&self) -> usize {
        self.cs[self.n_chunks()]
    }

    pub fn padding_slots(&self) -> usize {
        self.storage_slots() - self.nnz()
    }

    /// Chunk occupancy β: real entries over stored slots.
    pub fn chunk_occupancy(&self) -> f64 {
        let slots = self.storage_slots();
        if slots == 0 {
            return 1.0;
        }
        self.nnz() as f64 / slots as f64
    }

    /// Flat position of slot `j` of stored row `r`.
    #[inline]
    pub fn slot(&self, r: usize, j: usize) -> usize {
        let c = self.chunk_height;
        self.cs[r / c] + j * c + r % c
    }

    /// True when the stored arrays coincide with CRS (C = 1, no permutation).
    pub fn is_crs_equivalent(&self) -> bool {
        self.chunk_height == 1
            && self
                .inv_perm
                .iter()
                .enumerate()
                .all(|(i, &p)| p as usize == i)
    }

    /// Stored-space vector of length `n_rows_padded` back to original row order.
    pub fn unpermute_rows(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.n_rows_padded {
            return Err(param(format!(
                "expected {} stored rows, got {}",
                self.n_rows_padded,
                y.len()
            )));
        }
        perm::unpermute_vector(&y[..self.n_rows], &self.perm)
    }

    /// Maps an original-space RHS into the column space the kernel reads.
    pub fn permute_rhs(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_cols {
            return Err(param(format!(
                "x has length {}, expected {}",
                x.len(),
                self.n_cols
            )));
        }
        if self.col_permuted {
            perm::permute_vector(x, &self.perm)
        } else {
            Ok(x.to_vec())
        }
    }

    /// Logical entries in original coordinates, canonical order.
    pub fn to_coo(&self) -> CooMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for s in 0..self.n_rows {
            let row = self.inv_perm[s];
            for j in 0..self.row_len[s] as usize {
                let k = self.slot(s, j);
                let c = self.col[k];
                let col = if self.col_permuted {
                    self.inv_perm[c as usize]
                } else {
                    c
                };
                entries.push(Triplet {
                    row,
                    col,
                    val: self.val[k],
                });
            }
        }
        entries.sort_by_key(|t| (t.row, t.col));
        CooMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        }
    }

    pub fn to_crs(&self) -> Result<CrsMatrix> {
        CrsMatrix::from_coo(self.to_coo())
    }
}

/// Smallest `g` such that `C * g * min(value, index bytes)` is a multiple of
/// `align_bytes`; chunk widths are rounded up to multiples of `g`.
fn alignment_step(chunk_height: usize, align_bytes: usize) -> usize {
    let unit = chunk_height * VALUE_BYTES.min(INDEX_BYTES);
    align_bytes / gcd(align_bytes, unit)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn split_by_offsets<'a, T>(mut data: &'a mut [T], offsets: &[usize]) -> Vec<&'a mut [T]> {
    let mut out = Vec::with_capacity(offsets.len().saturating_sub(1));
    for w in offsets.windows(2) {
        let (head, tail) = data.split_at_mut(w[1] - w[0]);
        out.push(head);
        data = tail;
    }
    out
}
