//! Multiplies one matrix with every kernel and checks they agree.

use sellkit::io::gen_skewed;
use sellkit::kernels::{bench_spmv, Executor, Kernel, Schedule};
use sellkit::{CrsMatrix, SellConfig, SellMatrix};

fn main() -> sellkit::Result<()> {
    let crs = CrsMatrix::from_coo(gen_skewed(20_000, 12, 2_000, 8, 1)?)?;
    let sell = SellMatrix::from_crs(&crs, SellConfig::new(32, 1024).permute_cols(true))?;
    let x: Vec<f64> = (0..crs.n_cols).map(|i| (i as f64).sin()).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());

    let mut reference = vec![0.0; crs.n_rows];
    sellkit::kernels::spmv_crs(&crs, &x, &mut reference, false)?;

    for schedule in [Schedule::Static, Schedule::Guided1] {
        let exec = Executor::new(threads, schedule)?;
        for kernel in [
            Kernel::Crs(&crs),
            Kernel::CrsUnrolled(&crs),
            Kernel::Sell(&sell),
        ] {
            let xk = match kernel {
                Kernel::Sell(s) => s.permute_rhs(&x)?,
                _ => x.clone(),
            };
            let mut y = vec![0.0; kernel.y_len()];
            kernel.apply(&xk, &mut y, false, &exec)?;
            let y = kernel.output_to_original(&y)?;
            let err = y
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);

            let run = bench_spmv(kernel, &xk, 20, &exec)?;
            println!(
                "{:<13} {:<8} max |y - y_crs| = {err:.2e}  best {:.2} GF/s",
                kernel.name(),
                schedule.to_string(),
                run.best_gflops()
            );
        }
    }
    Ok(())
}
