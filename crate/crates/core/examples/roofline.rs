//! Code balance and roofline predictions for CRS and SELL-C-σ.

use sellkit::io::gen_banded;
use sellkit::model::{
    code_balance_crs, code_balance_sell, infer_alpha, upper_bound_gflops, ModelParams,
};
use sellkit::{compute_stats, CrsMatrix, SellConfig, SellMatrix};

fn main() -> sellkit::Result<()> {
    for b in [43.0, 165.0] {
        println!(
            "b = {b} GB/s: upper bound b*beta/6 at beta = 1 is {:.2} GF/s",
            upper_bound_gflops(b, 1.0)
        );
    }

    println!("\n  alpha  beta  N_nzr   B_CRS   B_SELL  [bytes/flop]");
    for (alpha, beta, n_nzr) in [
        (0.0, 1.0, 1e9),
        (0.02, 1.0, 50.0),
        (0.02, 0.5, 50.0),
        (1.0, 0.8, 7.0),
    ] {
        println!(
            "{alpha:>7.2} {beta:>5.2} {n_nzr:>6.0} {:>7.3} {:>8.3}",
            code_balance_crs(alpha, n_nzr)?,
            code_balance_sell(alpha, beta, n_nzr)?
        );
    }

    let crs = CrsMatrix::from_coo(gen_banded(100_000, 25, 1.0, 3)?)?;
    let stats = compute_stats(&crs);
    let sell = SellMatrix::from_crs(&crs, SellConfig::new(32, 1))?;
    let params = ModelParams::from_stats(&stats, sell.chunk_occupancy(), 43.0);
    let ideal = params.predict()?;
    println!(
        "\nbanded N = {}, N_nzr = {:.1}, beta = {:.4}: B = {:.3} bytes/flop, P = {:.2} GF/s",
        stats.n_rows,
        stats.n_nzr,
        params.beta,
        ideal.code_balance_bytes_per_flop,
        ideal.predicted_gflops
    );

    // a measured volume 10% above the ideal minimum, inverted back to alpha
    let v_ideal = ideal.code_balance_bytes_per_flop * 2.0 * stats.n_nz as f64;
    let est = infer_alpha(1.1 * v_ideal, stats.n_nz, params.beta, stats.n_nzr, 64)?;
    println!(
        "alpha from 1.1 x ideal traffic: {:.4} ({:?}); ideal 1/N_nzc = {:.4}",
        est.alpha, est.quality, params.alpha
    );
    Ok(())
}
