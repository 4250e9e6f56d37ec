//! Coordinate (triplet) storage, the ingestion and ground-truth form.

use rayon::slice::ParallelSliceMut;

use crate::error::{structural, Result};

/// Largest supported row/column count. Indices are stored with 4-byte
/// signed-integer semantics.
pub const MAX_DIM: usize = i32::MAX as usize;

/// One stored entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triplet {
    pub row: u32,
    pub col: u32,
    pub val: f64,
}

impl Triplet {
    pub fn new(row: usize, col: usize, val: f64) -> Self {
        Self {
            row: row as u32,
            col: col as u32,
            val,
        }
    }
}

impl From<(usize, usize, f64)> for Triplet {
    fn from((row, col, val): (usize, usize, f64)) -> Self {
        Triplet::new(row, col, val)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CooMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub entries: Vec<Triplet>,
}

impl CooMatrix {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn from_triplets<I, T>(n_rows: usize, n_cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<Triplet>,
    {
        Self {
            n_rows,
            n_cols,
            entries: entries.into_iter().map(Into::into).collect(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        self.entries.push(Triplet::new(row, col, val));
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn check_bounds(&self) -> Result<()> {
        if self.n_rows > MAX_DIM || self.n_cols > MAX_DIM {
            return Err(structural(format!(
                "dimensions {}x{} exceed the 4-byte index range",
                self.n_rows, self.n_cols
            )));
        }
        for (k, t) in self.entries.iter().enumerate() {
            if t.row as usize >= self.n_rows || t.col as usize >= self.n_cols {
                return Err(structural(format!(
                    "entry {k} at ({}, {}) outside {}x{} matrix",
                    t.row, t.col, self.n_rows, self.n_cols
                )));
            }
        }
        Ok(())
    }

    /// Sorts entries by (row, col) and sums duplicate coordinates.
    /// Explicit zeros are kept as stored entries.
    pub fn canonicalize(mut self) -> Result<Self> {
        self.check_bounds()?;
        if !self.is_canonical() {
            self.entries.par_sort_by_key(|t| (t.row, t.col));
            self.entries.dedup_by(|next, kept| {
                if next.row == kept.row && next.col == kept.col {
                    kept.val += next.val;
                    true
                } else {
                    false
                }
            });
        }
        Ok(self)
    }

    /// True when entries are strictly increasing in (row, col).
    pub fn is_canonical(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| (w[0].row, w[0].col) < (w[1].row, w[1].col))
    }
}
