use std::time::Instant;

use serde::Serialize;

use super::{Executor, Kernel, Schedule};
use crate::error::{param, Result};

/// Timing of a series of SpMV invocations.
#[derive(Debug, Clone, Serialize)]
pub struct SpmvRun {
    pub kernel: &'static str,
    /// Useful flops per invocation, `2 * nnz`.
    pub flops: u64,
    /// Total wall time of the timed repetitions.
    pub wall_seconds: f64,
    pub repetitions: usize,
    /// `flops * repetitions / wall_seconds / 1e9`.
    pub gflops: f64,
    pub best_seconds: f64,
    pub median_seconds: f64,
    pub scheduling: Schedule,
    pub threads: usize,
    /// Sum of the result in original row order.
    pub checksum: f64,
}

impl SpmvRun {
    pub fn best_gflops(&self) -> f64 {
        self.flops as f64 / self.best_seconds / 1e9
    }

    pub fn median_gflops(&self) -> f64 {
        self.flops as f64 / self.median_seconds / 1e9
    }
}

/// Runs one warm-up multiplication, then times `repetitions` more.
pub fn bench_spmv(
    kernel: Kernel<'_>,
    x: &[f64],
    repetitions: usize,
    exec: &Executor,
) -> Result<SpmvRun> {
    if repetitions == 0 {
        return Err(param("repetitions must be at least 1"));
    }
    let mut y = vec![0.0; kernel.y_len()];
    kernel.apply(x, &mut y, false, exec)?;

    let mut times = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        kernel.apply(x, &mut y, false, exec)?;
        times.push(start.elapsed().as_secs_f64());
        std::hint::black_box(&mut y);
    }
    let wall_seconds: f64 = times.iter().sum();
    times.sort_by(f64::total_cmp);
    let best_seconds = times[0];
    let median_seconds = median_of_sorted(&times);

    let flops = 2 * kernel.nnz() as u64;
    let checksum = kernel.output_to_original(&y)?.iter().sum();
    Ok(SpmvRun {
        kernel: kernel.name(),
        flops,
        wall_seconds,
        repetitions,
        gflops: flops as f64 * repetitions as f64 / wall_seconds / 1e9,
        best_seconds,
        median_seconds,
        scheduling: exec.schedule(),
        threads: exec.threads(),
        checksum,
    })
}

fn median_of_sorted(t: &[f64]) -> f64 {
    let n = t.len();
    if n % 2 == 1 {
        t[n / 2]
    } else {
        0.5 * (t[n / 2 - 1] + t[n / 2])
    }
}
