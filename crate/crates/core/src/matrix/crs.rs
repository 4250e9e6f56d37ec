//! Compressed Row Storage.

use super::coo::{CooMatrix, Triplet, MAX_DIM};
use crate::error::{structural, Result};

/// Row-pointer compressed matrix: row `i` occupies `rpt[i]..rpt[i+1]` of
/// `col` and `val`, with strictly increasing column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CrsMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub rpt: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
}

impl CrsMatrix {
    /// Builds from raw arrays, checking every structural invariant.
    pub fn from_parts(
        n_rows: usize,
        n_cols: usize,
        rpt: Vec<usize>,
        col: Vec<u32>,
        val: Vec<f64>,
    ) -> Result<Self> {
        if n_rows > MAX_DIM || n_cols > MAX_DIM {
            return Err(structural("dimensions exceed the 4-byte index range"));
        }
        if rpt.len() != n_rows + 1 {
            return Err(structural(format!(
                "rpt has length {}, expected {}",
                rpt.len(),
                n_rows + 1
            )));
        }
        if rpt[0] != 0 || rpt[n_rows] != col.len() || col.len() != val.len() {
            return Err(structural(
                "rpt must start at 0 and end at nnz = len(col) = len(val)",
            ));
        }
        for i in 0..n_rows {
            if rpt[i] > rpt[i + 1] {
                return Err(structural(format!("rpt decreases at row {i}")));
            }
            let row = &col[rpt[i]..rpt[i + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(structural(format!(
                    "columns of row {i} not strictly increasing"
                )));
            }
            if row.last().is_some_and(|&c| c as usize >= n_cols) {
                return Err(structural(format!("column index out of range in row {i}")));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            rpt,
            col,
            val,
        })
    }

    /// Canonicalizes `coo` and compresses it row by row.
    pub fn from_coo(coo: CooMatrix) -> Result<Self> {
        let coo = coo.canonicalize()?;
        let mut rpt = vec![0usize; coo.n_rows + 1];
        for t in &coo.entries {
            rpt[t.row as usize + 1] += 1;
        }
        for i in 0..coo.n_rows {
            rpt[i + 1] += rpt[i];
        }
        let (col, val) = coo.entries.iter().map(|t| (t.col, t.val)).unzip();
        Ok(Self {
            n_rows: coo.n_rows,
            n_cols: coo.n_cols,
            rpt,
            col,
            val,
        })
    }

    pub fn to_coo(&self) -> CooMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            for j in self.rpt[i]..self.rpt[i + 1] {
                entries.push(Triplet {
                    row: i as u32,
                    col: self.col[j],
                    val: self.val[j],
                });
            }
        }
        CooMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries,
        }
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.rpt[i + 1] - self.rpt[i]
    }

    pub fn row_lengths(&self) -> Vec<usize> {
        self.rpt.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.rpt[i]..self.rpt[i + 1];
        (&self.col[r.clone()], &self.val[r])
    }

    /// Dense row-major copy, for small test matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (i, row) in dense.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c as usize] = v;
            }
        }
        dense
    }
}

impl TryFrom<CooMatrix> for CrsMatrix {
    type Error = crate::Error;

    fn try_from(coo: CooMatrix) -> Result<Self> {
        Self::from_coo(coo)
    }
}
