//! Picks static or guided scheduling from row-length variation and compares
//! both on a regular and an irregular matrix.

use sellkit::io::{gen_banded, gen_skewed};
use sellkit::kernels::{bench_spmv, choose_scheduling, Executor, Kernel, Schedule};
use sellkit::model::llc_bytes_or_default;
use sellkit::{compute_stats, CooMatrix, CrsMatrix, SellConfig, SellMatrix};

fn report(name: &str, coo: CooMatrix) -> sellkit::Result<()> {
    let crs = CrsMatrix::from_coo(coo)?;
    let stats = compute_stats(&crs);
    let llc = llc_bytes_or_default();
    println!(
        "{name}: zeta = {:.2}, footprint {} MiB -> {} with a {} MiB LLC, {} with a 1 MiB LLC",
        stats.zeta,
        stats.footprint_bytes >> 20,
        choose_scheduling(&stats, llc),
        llc >> 20,
        choose_scheduling(&stats, 1 << 20)
    );
    let sell = SellMatrix::from_crs(&crs, SellConfig::new(32, 1 << 15))?;
    let x = vec![1.0; crs.n_cols];
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    for schedule in [Schedule::Static, Schedule::Guided1] {
        let run = bench_spmv(
            Kernel::Sell(&sell),
            &x,
            10,
            &Executor::new(threads, schedule)?,
        )?;
        println!("  {schedule:<8} {:.2} GF/s (median)", run.median_gflops());
    }
    Ok(())
}

fn main() -> sellkit::Result<()> {
    report("banded", gen_banded(300_000, 8, 1.0, 1)?)?;
    report("skewed", gen_skewed(300_000, 6, 30_000, 40, 1)?)?;
    Ok(())
}
