//! Structural statistics that drive scheduling and the performance model.

use serde::Serialize;

use super::crs::CrsMatrix;
use super::sell::{INDEX_BYTES, VALUE_BYTES};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixStats {
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_nz: usize,
    /// Average nonzeros per row.
    pub n_nzr: f64,
    /// Average nonzeros per column.
    pub n_nzc: f64,
    pub density: f64,
    #[serde(skip)]
    pub row_lengths: Vec<usize>,
    /// Coefficient of variation of the row lengths.
    pub zeta: f64,
    /// Matrix arrays, row pointer and both vectors, in bytes.
    pub footprint_bytes: usize,
}

impl MatrixStats {
    pub fn from_crs(m: &CrsMatrix) -> Self {
        let row_lengths = m.row_lengths();
        let n_nz = m.nnz();
        let per = |d: usize| if d == 0 { 0.0 } else { n_nz as f64 / d as f64 };
        let n_nzr = per(m.n_rows);
        let n_nzc = per(m.n_cols);
        let cells = m.n_rows as f64 * m.n_cols as f64;
        let density = if cells == 0.0 {
            0.0
        } else {
            n_nz as f64 / cells
        };
        let zeta = coefficient_of_variation(&row_lengths);
        let footprint_bytes = n_nz * (VALUE_BYTES + INDEX_BYTES)
            + (m.n_rows + 1) * INDEX_BYTES
            + (m.n_rows + m.n_cols) * VALUE_BYTES;
        Self {
            n_rows: m.n_rows,
            n_cols: m.n_cols,
            n_nz,
            n_nzr,
            n_nzc,
            density,
            row_lengths,
            zeta,
            footprint_bytes,
        }
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }
}

pub fn compute_stats(m: &CrsMatrix) -> MatrixStats {
    MatrixStats::from_crs(m)
}

/// Population standard deviation of `lengths` over their mean; 0 when the
/// mean is 0.
pub fn coefficient_of_variation(lengths: &[usize]) -> f64 {
    if lengths.is_empty() {
        return 0.0;
    }
    let n = lengths.len() as f64;
    let mean = lengths.iter().map(|&l| l as f64).sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let var = lengths
        .iter()
        .map(|&l| (l as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    var.sqrt() / mean
}
