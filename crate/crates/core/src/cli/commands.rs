//! The six commands. Each returns a [`Report`]; rendering and output are
//! left to the caller.

use std::io::Read;
use std::time::Instant;

use serde_json::{json, Value};

use super::report::{num, Report};
use super::source::{load_matrix, LoadedMatrix};
use super::{
    AnalyzeArgs, BenchArgs, ConvertArgs, KernelKind, MicrobenchArgs, MicrobenchKind, ModelArgs,
    SchedArg, SweepArgs,
};
use crate::error::{param, Result};
use crate::io::write_sell_cache;
use crate::kernels::{bench_spmv, choose_scheduling, Executor, Kernel, Schedule};
use crate::matrix::{compute_stats, CrsMatrix, MatrixStats, SellConfig, SellMatrix};
use crate::model::{
    code_balance_crs, infer_alpha, llc_bytes_or_default, microbench_copy, microbench_read_sum,
    simulate_rhs_traffic, AlphaQuality, ModelParams,
};

/// Deterministic right-hand side used by every benchmark.
pub fn rhs_vector(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 + (i % 97) as f64 / 97.0).collect()
}

fn build(crs: &CrsMatrix, c: usize, sigma: usize, permute_cols: bool) -> Result<SellMatrix> {
    SellMatrix::from_crs(crs, SellConfig::new(c, sigma).permute_cols(permute_cols))
}

/// `cache` when it already has the requested layout, else a fresh build.
fn sell_for(m: &LoadedMatrix, c: usize, sigma: usize, permute_cols: bool) -> Result<SellMatrix> {
    match &m.cache {
        Some(s)
            if s.chunk_height() == c && s.sigma() == sigma && s.col_permuted() == permute_cols =>
        {
            Ok(s.clone())
        }
        _ => build(&m.crs, c, sigma, permute_cols),
    }
}

fn alpha_quality(q: AlphaQuality) -> &'static str {
    match q {
        AlphaQuality::Ok => "ok",
        AlphaQuality::Negative => "negative",
        AlphaQuality::AboveLineLength => "above_line",
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let c = a
        .layout
        .resolve(m.cache.as_ref().map(SellMatrix::chunk_height));
    let sigmas = match (&m.cache, a.sigma.is_empty()) {
        (_, false) => a.sigma.clone(),
        (Some(s), true) if !a.layout.is_set() => vec![s.sigma()],
        _ => vec![1],
    };
    let stats = compute_stats(&m.crs);
    let mut r = Report::new(
        "analyze",
        &[
            "C",
            "sigma",
            "N",
            "N_cols",
            "nnz",
            "N_nzr",
            "N_nzc",
            "density",
            "zeta",
            "beta",
            "padding [slots]",
        ],
    );
    r.input("matrix", a.matrix.as_str())
        .input("C", c)
        .input("sigma", json!(sigmas));
    for &sigma in &sigmas {
        let permute = m.cache.as_ref().is_some_and(SellMatrix::col_permuted);
        let s = sell_for(&m, c, sigma, permute)?;
        r.push_row(vec![
            json!(c),
            json!(sigma),
            json!(stats.n_rows),
            json!(stats.n_cols),
            json!(stats.n_nz),
            num(stats.n_nzr),
            num(stats.n_nzc),
            num(stats.density),
            num(stats.zeta),
            num(s.chunk_occupancy()),
            json!(s.padding_slots()),
        ]);
    }
    Ok(r)
}

pub fn cmd_convert(a: &ConvertArgs) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let c = a.layout.resolve(None);
    if a.permute_cols && !m.crs.is_square() {
        return Err(param(format!(
            "--permute-cols needs a square matrix, got {}x{}: rows and columns cannot share one permutation",
            m.crs.n_rows, m.crs.n_cols
        )));
    }
    let cfg = SellConfig::new(c, a.sigma)
        .align_bytes(a.align_bytes)
        .permute_cols(a.permute_cols);
    let start = Instant::now();
    let s = SellMatrix::from_crs(&m.crs, cfg)?;
    let build_seconds = start.elapsed().as_secs_f64();
    write_sell_cache(&s, &a.output)?;

    let mut r = Report::new(
        "convert",
        &[
            "C",
            "sigma",
            "N",
            "nnz",
            "beta",
            "padding [bytes]",
            "build [s]",
            "crs_equivalent",
            "output",
        ],
    );
    r.input("matrix", a.matrix.as_str())
        .input("C", c)
        .input("sigma", a.sigma)
        .input("align_bytes", a.align_bytes)
        .input("permute_cols", a.permute_cols);
    let slot_bytes = crate::matrix::sell::VALUE_BYTES + crate::matrix::sell::INDEX_BYTES;
    r.push_row(vec![
        json!(c),
        json!(a.sigma),
        json!(s.n_rows()),
        json!(s.nnz()),
        num(s.chunk_occupancy()),
        json!(s.padding_slots() * slot_bytes),
        num(build_seconds),
        json!(s.is_crs_equivalent()),
        json!(a.output.display().to_string()),
    ]);
    Ok(r)
}

fn resolve_schedule(sched: SchedArg, stats: &MatrixStats, llc_bytes: Option<usize>) -> Schedule {
    match sched {
        SchedArg::Auto => choose_scheduling(stats, llc_bytes.unwrap_or_else(llc_bytes_or_default)),
        SchedArg::Static => Schedule::Static,
        SchedArg::Guided1 => Schedule::Guided1,
    }
}

pub fn cmd_bench(a: &BenchArgs) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let stats = compute_stats(&m.crs);
    let exec = Executor::new(
        a.threads.resolve(),
        resolve_schedule(a.sched, &stats, a.llc_bytes),
    )?;
    let x = rhs_vector(m.crs.n_cols);

    let sell = match a.kernel {
        KernelKind::Sell => {
            let c = a
                .layout
                .resolve(m.cache.as_ref().map(SellMatrix::chunk_height));
            let sigma = a
                .sigma
                .or(m.cache.as_ref().map(SellMatrix::sigma))
                .unwrap_or(1);
            Some(sell_for(&m, c, sigma, a.permute_cols)?)
        }
        _ => None,
    };
    let (kernel, xk) = match (a.kernel, &sell) {
        (KernelKind::Crs, _) => (Kernel::Crs(&m.crs), x),
        (KernelKind::CrsUnrolled, _) => (Kernel::CrsUnrolled(&m.crs), x),
        (KernelKind::Sell, Some(s)) => (Kernel::Sell(s), s.permute_rhs(&x)?),
        (KernelKind::Sell, None) => unreachable!("SELL matrix is built above"),
    };
    let run = bench_spmv(kernel, &xk, a.reps, &exec)?;
    let beta = sell.as_ref().map_or(1.0, SellMatrix::chunk_occupancy);

    let mut r = Report::new(
        "bench",
        &[
            "kernel",
            "C",
            "sigma",
            "beta",
            "threads",
            "schedule",
            "reps",
            "best [GF/s]",
            "median [GF/s]",
            "mean [GF/s]",
            "checksum",
            "bound [GF/s]",
            "roofline [GF/s]",
            "roofline_fraction",
        ],
    );
    r.input("matrix", a.matrix.as_str())
        .input("kernel", run.kernel)
        .input("reps", a.reps);
    if let Some(b) = a.bandwidth {
        r.input("bandwidth [GB/s]", num(b));
    }
    let (bound, roof, frac) = match a.bandwidth {
        Some(b) => {
            let params = ModelParams::from_stats(&stats, beta, b);
            let roof = params.predict()?.predicted_gflops;
            (
                num(params.upper_bound()),
                num(roof),
                num(run.best_gflops() / roof),
            )
        }
        None => (Value::Null, Value::Null, Value::Null),
    };
    r.push_row(vec![
        json!(run.kernel),
        sell.as_ref()
            .map_or(Value::Null, |s| json!(s.chunk_height())),
        sell.as_ref().map_or(Value::Null, |s| json!(s.sigma())),
        num(beta),
        json!(run.threads),
        json!(run.scheduling.to_string()),
        json!(run.repetitions),
        num(run.best_gflops()),
        num(run.median_gflops()),
        num(run.gflops),
        num(run.checksum),
        bound,
        roof,
        frac,
    ]);
    Ok(r)
}

pub fn cmd_sweep_sigma(a: &SweepArgs) -> Result<Report> {
    let m = load_matrix(&a.matrix)?;
    let c = a
        .layout
        .resolve(m.cache.as_ref().map(SellMatrix::chunk_height));
    if c == 0 {
        return Err(param("chunk height must be positive"));
    }
    let sigma_min = a.sigma_min.unwrap_or(c);
    if !sigma_min.is_multiple_of(c) || !(sigma_min / c).is_power_of_two() {
        return Err(param(format!(
            "sigma_min {sigma_min} must be a power-of-two multiple of C = {c}"
        )));
    }
    let n_pad = m.crs.n_rows.div_ceil(c).max(1) * c;
    let sigma_max = a.sigma_max.unwrap_or_else(|| {
        let mut s = sigma_min;
        while s < n_pad {
            s *= 2;
        }
        s
    });
    if sigma_max < sigma_min {
        return Err(param(format!(
            "sigma_max {sigma_max} is below sigma_min {sigma_min}"
        )));
    }
    let llc = llc_bytes_or_default();
    let cache_bytes = a.cache_bytes.unwrap_or(llc);
    let stats = compute_stats(&m.crs);
    let exec = Executor::new(a.threads.resolve(), choose_scheduling(&stats, llc))?;
    let x = rhs_vector(m.crs.n_cols);

    let mut r = Report::new(
        "sweep-sigma",
        &[
            "sigma",
            "beta",
            "traffic [bytes]",
            "alpha_sim",
            "alpha_ideal",
            "alpha_quality",
            "best [GF/s]",
            "median [GF/s]",
        ],
    );
    r.input("matrix", a.matrix.as_str())
        .input("C", c)
        .input("sigma_min", sigma_min)
        .input("sigma_max", sigma_max)
        .input("cache_bytes", cache_bytes)
        .input("line_bytes", a.line_bytes)
        .input("reps", a.reps)
        .input("permute_cols", a.permute_cols);
    let alpha_ideal = if stats.n_nzc > 0.0 {
        num(1.0 / stats.n_nzc)
    } else {
        Value::Null
    };

    let mut sigma = sigma_min;
    while sigma <= sigma_max {
        let s = build(&m.crs, c, sigma, a.permute_cols)?;
        let beta = s.chunk_occupancy();
        let traffic = simulate_rhs_traffic(Kernel::Sell(&s), cache_bytes, a.line_bytes)?;
        let (alpha, quality) = if s.nnz() > 0 {
            let est = infer_alpha(
                traffic.total() as f64,
                s.nnz(),
                beta,
                stats.n_nzr,
                a.line_bytes,
            )?;
            (num(est.alpha), json!(alpha_quality(est.quality)))
        } else {
            (Value::Null, Value::Null)
        };
        let (best, median) = if a.reps > 0 {
            let run = bench_spmv(Kernel::Sell(&s), &s.permute_rhs(&x)?, a.reps, &exec)?;
            (num(run.best_gflops()), num(run.median_gflops()))
        } else {
            (Value::Null, Value::Null)
        };
        r.push_row(vec![
            json!(sigma),
            num(beta),
            json!(traffic.total()),
            alpha,
            alpha_ideal.clone(),
            quality,
            best,
            median,
        ]);
        sigma *= 2;
    }
    Ok(r)
}

/// `input` is read only when `--beta-from -` is given.
pub fn cmd_model(a: &ModelArgs, input: &mut dyn Read) -> Result<Report> {
    let analyze = match a.beta_from.as_deref() {
        Some("-") => {
            let mut text = String::new();
            input.read_to_string(&mut text)?;
            Some(Report::from_json(&text)?)
        }
        Some(path) => Some(Report::from_json(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let from_report = |name: &str| -> Result<Option<f64>> {
        let Some(rep) = &analyze else { return Ok(None) };
        if rep.rows.is_empty() {
            return Err(param("analyze report has no rows"));
        }
        let row = a.row.unwrap_or(rep.rows.len() - 1);
        let k = rep.column_index(name);
        Ok(rep
            .rows
            .get(row)
            .ok_or_else(|| param(format!("report has no row {row}")))?
            .get(k.unwrap_or(usize::MAX))
            .and_then(Value::as_f64))
    };

    let loaded = a.matrix.as_deref().map(load_matrix).transpose()?;
    let stats = loaded.as_ref().map(|m| compute_stats(&m.crs));
    let c = a.layout.resolve(None);
    let need_sell = a.alpha == "simulate" || (a.beta.is_none() && analyze.is_none());
    let sell = match (&loaded, need_sell) {
        (Some(m), true) => Some(sell_for(m, c, a.sigma, false)?),
        _ => None,
    };

    let beta = match a.beta {
        Some(b) => b,
        None => from_report("beta")?
            .or(sell.as_ref().map(SellMatrix::chunk_occupancy))
            .ok_or_else(|| param("beta needed: pass --beta, --beta-from or --matrix"))?,
    };
    let n_nzr = match a.nnzr {
        Some(v) => v,
        None => from_report("N_nzr")?
            .or(stats.as_ref().map(|s| s.n_nzr))
            .ok_or_else(|| param("N_nzr needed: pass --nnzr, --beta-from or --matrix"))?,
    };
    let n_nzc = match a.nnzc {
        Some(v) => v,
        None => from_report("N_nzc")?
            .or(stats.as_ref().map(|s| s.n_nzc))
            .unwrap_or(n_nzr),
    };
    let square = match &stats {
        Some(s) => s.is_square(),
        None => match (from_report("N")?, from_report("N_cols")?) {
            (Some(n), Some(nc)) => n == nc,
            _ => true,
        },
    };
    let alpha = match a.alpha.as_str() {
        "ideal" => 1.0 / n_nzc,
        "simulate" => {
            let s = sell
                .as_ref()
                .ok_or_else(|| param("--alpha simulate needs --matrix"))?;
            let cache = a.cache_bytes.unwrap_or_else(llc_bytes_or_default);
            let traffic = simulate_rhs_traffic(Kernel::Sell(s), cache, a.line_bytes)?;
            let own_nzr = stats.as_ref().map_or(n_nzr, |st| st.n_nzr);
            infer_alpha(
                traffic.total() as f64,
                s.nnz(),
                s.chunk_occupancy(),
                own_nzr,
                a.line_bytes,
            )?
            .alpha
        }
        v => v.parse().map_err(|_| {
            param(format!(
                "--alpha must be a number, 'ideal' or 'simulate', got {v:?}"
            ))
        })?,
    };

    let mut r = Report::new(
        "model",
        &[
            "bandwidth [GB/s]",
            "alpha",
            "beta",
            "N_nzr",
            "balance_crs [bytes/flop]",
            "balance_sell [bytes/flop]",
            "P [GF/s]",
            "P_bound [GF/s]",
            "non_square_caveat",
        ],
    );
    r.input("alpha", a.alpha.as_str());
    if let Some(mat) = &a.matrix {
        r.input("matrix", mat.as_str());
    }
    for &b in &a.bandwidth {
        let params = ModelParams {
            alpha,
            beta,
            n_nzr,
            n_nzc,
            bandwidth_gbps: b,
            square,
        };
        let res = params.predict()?;
        r.push_row(vec![
            num(b),
            num(alpha),
            num(beta),
            num(n_nzr),
            num(code_balance_crs(alpha, n_nzr)?),
            num(res.code_balance_bytes_per_flop),
            num(res.predicted_gflops),
            num(params.upper_bound()),
            json!(res.non_square_caveat),
        ]);
    }
    Ok(r)
}

pub fn cmd_microbench(a: &MicrobenchArgs) -> Result<Report> {
    let size_mb = a
        .size_mb
        .unwrap_or_else(|| (4 * llc_bytes_or_default()).div_ceil(1 << 20));
    let n_elems = (size_mb << 20) / 8;
    let threads = a.threads.resolve();
    let (name, bw) = match a.kind {
        MicrobenchKind::Copy => ("copy", microbench_copy(n_elems, a.reps, threads)?),
        MicrobenchKind::Read => ("read", microbench_read_sum(n_elems, a.reps, threads)?),
    };
    let mut r = Report::new(
        "microbench",
        &[
            "kernel",
            "size [MiB]",
            "reps",
            "threads",
            "time [s]",
            "raw [GB/s]",
            "corrected [GB/s]",
        ],
    );
    r.input("kind", name)
        .input("size_mb", size_mb)
        .input("reps", a.reps)
        .input("threads", threads);
    r.push_row(vec![
        json!(name),
        json!(size_mb),
        json!(a.reps),
        json!(threads),
        num(bw.seconds),
        num(bw.raw_gbps),
        num(bw.corrected_gbps),
    ]);
    Ok(r)
}
