//! Code balance (bytes per flop) and roofline predictions for double
//! precision values with 4-byte indices.
//!
//! Per nonzero the kernel streams 8 bytes of value and 4 bytes of index,
//! reads `8α` bytes of RHS and, per row, reads and writes one 8-byte LHS
//! element. With 2 flops per nonzero:
//!
//! ```text
//! B_CRS  = 6 + 4α + 8/N_nzr
//! B_SELL = 6/β + 4α + 8/N_nzr
//! P      = b / B
//! ```

use serde::Serialize;

use crate::error::{param, Result};
use crate::matrix::MatrixStats;

/// Matrix bytes (value + index) per flop.
const MATRIX_BYTES_PER_FLOP: f64 = 6.0;
/// RHS bytes per flop per unit of α.
const RHS_BYTES_PER_FLOP: f64 = 4.0;
/// LHS bytes per flop per unit of 1/N_nzr.
const LHS_BYTES_PER_FLOP: f64 = 8.0;

pub fn code_balance_crs(alpha: f64, n_nzr: f64) -> Result<f64> {
    code_balance_sell(alpha, 1.0, n_nzr)
}

pub fn code_balance_sell(alpha: f64, beta: f64, n_nzr: f64) -> Result<f64> {
    if n_nzr.is_nan() || n_nzr <= 0.0 {
        return Err(param(format!("N_nzr must be positive, got {n_nzr}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(param(format!("beta must lie in (0, 1], got {beta}")));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(param(format!("alpha must be non-negative, got {alpha}")));
    }
    Ok(MATRIX_BYTES_PER_FLOP / beta + RHS_BYTES_PER_FLOP * alpha + LHS_BYTES_PER_FLOP / n_nzr)
}

/// Inputs to the roofline model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub n_nzr: f64,
    pub n_nzc: f64,
    /// Achievable memory bandwidth `b` in GB/s.
    pub bandwidth_gbps: f64,
    /// The balance derivation assumes a square matrix.
    pub square: bool,
}

impl ModelParams {
    /// Parameters for `stats` with the ideal RHS traffic `α = 1/N_nzc`.
    pub fn from_stats(stats: &MatrixStats, beta: f64, bandwidth_gbps: f64) -> Self {
        let n_nzc = if stats.n_nzc > 0.0 { stats.n_nzc } else { 1.0 };
        Self {
            alpha: 1.0 / n_nzc,
            beta,
            n_nzr: stats.n_nzr,
            n_nzc,
            bandwidth_gbps,
            square: stats.is_square(),
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn code_balance(&self) -> Result<f64> {
        code_balance_sell(self.alpha, self.beta, self.n_nzr)
    }

    /// Roofline prediction with this parameter set's α.
    pub fn predict(&self) -> Result<ModelResult> {
        roofline(self, self.code_balance()?)
    }

    /// Roofline prediction in the ideal case where every RHS element is
    /// loaded once (`α = 1/N_nzc`).
    pub fn predict_ideal_alpha(&self) -> Result<ModelResult> {
        self.with_alpha(1.0 / self.n_nzc).predict()
    }

    /// `b β / 6`: the bound for long rows and perfectly cached RHS.
    pub fn upper_bound(&self) -> f64 {
        upper_bound_gflops(self.bandwidth_gbps, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelResult {
    pub code_balance_bytes_per_flop: f64,
    pub predicted_gflops: f64,
    /// Set for non-square matrices, where the balance model is approximate.
    pub non_square_caveat: bool,
}

/// `P = b / B`.
pub fn roofline(params: &ModelParams, balance: f64) -> Result<ModelResult> {
    if balance.is_nan() || balance <= 0.0 {
        return Err(param(format!(
            "code balance must be positive, got {balance}"
        )));
    }
    Ok(ModelResult {
        code_balance_bytes_per_flop: balance,
        predicted_gflops: params.bandwidth_gbps / balance,
        non_square_caveat: !params.square,
    })
}

pub fn upper_bound_gflops(bandwidth_gbps: f64, beta: f64) -> f64 {
    bandwidth_gbps * beta / MATRIX_BYTES_PER_FLOP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlphaQuality {
    Ok,
    /// Measured traffic is below what the matrix alone requires.
    Negative,
    /// More than one full cache line per RHS access.
    AboveLineLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub quality: AlphaQuality,
}

/// Solves the SELL balance for α given the measured data volume of one
/// bandwidth-bound SpMV: `α = (V / (2 N_nz) - 6/β - 8/N_nzr) / 4`.
///
/// `line_bytes / 8` is the largest physically meaningful α; values outside
/// `[0, line_bytes / 8]` are returned unchanged with a quality flag.
pub fn infer_alpha(
    v_meas_bytes: f64,
    n_nz: usize,
    beta: f64,
    n_nzr: f64,
    line_bytes: usize,
) -> Result<AlphaEstimate> {
    if n_nz == 0 {
        return Err(param("cannot infer alpha for a matrix without nonzeros"));
    }
    if !(beta > 0.0 && beta <= 1.0) || n_nzr.is_nan() || n_nzr <= 0.0 {
        return Err(param("beta must lie in (0, 1] and N_nzr must be positive"));
    }
    let balance = v_meas_bytes / (2.0 * n_nz as f64);
    let alpha =
        (balance - MATRIX_BYTES_PER_FLOP / beta - LHS_BYTES_PER_FLOP / n_nzr) / RHS_BYTES_PER_FLOP;
    let line_elems = line_bytes as f64 / 8.0;
    let quality = if alpha < 0.0 {
        AlphaQuality::Negative
    } else if alpha > line_elems {
        AlphaQuality::AboveLineLength
    } else {
        AlphaQuality::Ok
    };
    Ok(AlphaEstimate { alpha, quality })
}
