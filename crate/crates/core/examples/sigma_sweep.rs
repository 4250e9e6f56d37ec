//! Chunk occupancy and simulated RHS traffic across sorting scopes.

use sellkit::io::{gen_banded, gen_skewed};
use sellkit::kernels::Kernel;
use sellkit::model::{infer_alpha, simulate_rhs_traffic};
use sellkit::{compute_stats, CooMatrix, CrsMatrix, SellConfig, SellMatrix};

fn sweep(name: &str, coo: CooMatrix, c: usize, cache_bytes: usize) -> sellkit::Result<()> {
    let crs = CrsMatrix::from_coo(coo)?;
    let stats = compute_stats(&crs);
    println!(
        "{name}: N = {}, N_nzr = {:.2}, zeta = {:.2}, cache {cache_bytes} bytes",
        stats.n_rows, stats.n_nzr, stats.zeta
    );
    println!("  {:>7} {:>8} {:>9}", "sigma", "beta", "alpha");
    let mut sigma = c;
    while sigma < 2 * crs.n_rows {
        let sell = SellMatrix::from_crs(&crs, SellConfig::new(c, sigma))?;
        let beta = sell.chunk_occupancy();
        let v = simulate_rhs_traffic(Kernel::Sell(&sell), cache_bytes, 64)?.total();
        let alpha = infer_alpha(v as f64, crs.nnz(), beta, stats.n_nzr, 64)?.alpha;
        println!("  {sigma:>7} {beta:>8.4} {alpha:>9.4}");
        sigma *= 4;
    }
    Ok(())
}

fn main() -> sellkit::Result<()> {
    sweep(
        "banded, half-filled",
        gen_banded(50_000, 20, 0.5, 7)?,
        16,
        64 << 10,
    )?;
    sweep("skewed", gen_skewed(50_000, 4, 400, 500, 7)?, 16, 64 << 10)?;
    Ok(())
}
