//! Copy and read-only bandwidth microbenchmarks.
//!
//! The copy loop uses ordinary stores, so every written line is also read
//! (write-allocate). The loop moves 16 bytes per element but the memory
//! interface carries 24; the reported corrected figure multiplies the loop
//! bandwidth by 1.5.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Result};

pub const WRITE_ALLOCATE_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bandwidth {
    /// Bytes moved by the loop per repetition.
    pub loop_bytes_per_rep: u64,
    pub repetitions: usize,
    pub seconds: f64,
    /// Loop traffic over time, in GB/s.
    pub raw_gbps: f64,
    /// Traffic over the memory interface, in GB/s.
    pub corrected_gbps: f64,
    /// Consumed result, keeps the work observable.
    pub checksum: f64,
}

pub fn copy_bandwidth_from_timing(n_elems: usize, reps: usize, seconds: f64) -> Bandwidth {
    let loop_bytes_per_rep = 16 * n_elems as u64;
    let raw_gbps = loop_bytes_per_rep as f64 * reps as f64 / seconds / 1e9;
    Bandwidth {
        loop_bytes_per_rep,
        repetitions: reps,
        seconds,
        raw_gbps,
        corrected_gbps: raw_gbps * WRITE_ALLOCATE_FACTOR,
        checksum: 0.0,
    }
}

pub fn read_bandwidth_from_timing(n_elems: usize, reps: usize, seconds: f64) -> Bandwidth {
    let loop_bytes_per_rep = 8 * n_elems as u64;
    let raw_gbps = loop_bytes_per_rep as f64 * reps as f64 / seconds / 1e9;
    Bandwidth {
        loop_bytes_per_rep,
        repetitions: reps,
        seconds,
        raw_gbps,
        corrected_gbps: raw_gbps,
        checksum: 0.0,
    }
}

/// Assumed last-level cache size when the OS does not report one.
pub const DEFAULT_LLC_BYTES: usize = 32 << 20;

/// Size of the largest CPU cache reported under
/// `/sys/devices/system/cpu/cpu0/cache`.
pub fn detect_llc_bytes() -> Option<usize> {
    let dir = std::fs::read_dir("/sys/devices/system/cpu/cpu0/cache").ok()?;
    dir.filter_map(|e| std::fs::read_to_string(e.ok()?.path().join("size")).ok())
        .filter_map(|s| parse_cache_size(&s))
        .max()
}

/// Parses sizes like `32K`, `107520K` or `8M`.
pub fn parse_cache_size(s: &str) -> Option<usize> {
    let s = s.trim();
    let (digits, unit) = s.split_at(s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len()));
    let n: usize = digits.parse().ok()?;
    let scale = match unit.trim().to_ascii_uppercase().as_str() {
        "" | "B" => 1,
        "K" | "KB" | "KIB" => 1 << 10,
        "M" | "MB" | "MIB" => 1 << 20,
        "G" | "GB" | "GIB" => 1 << 30,
        _ => return None,
    };
    Some(n * scale)
}

pub fn llc_bytes_or_default() -> usize {
    detect_llc_bytes().unwrap_or(DEFAULT_LLC_BYTES)
}

/// `b[i] = a[i]` over `n_elems` doubles, `reps` times.
pub fn microbench_copy(n_elems: usize, reps: usize, threads: usize) -> Result<Bandwidth> {
    check(n_elems, reps, threads)?;
    let a: Vec<f64> = (0..n_elems).map(|i| (i % 1024) as f64).collect();
    let mut b = vec![0.0f64; n_elems];
    let pool = pool(threads)?;
    let block = n_elems.div_ceil(threads);

    let run = |a: &[f64], b: &mut [f64]| {
        pool.install(|| {
            b.par_chunks_mut(block)
                .zip(a.par_chunks(block))
                .for_each(|(d, s)| copy_block(d, s));
        })
    };
    run(&a, &mut b);
    let start = Instant::now();
    for _ in 0..reps {
        run(&a, &mut b);
        std::hint::black_box(&mut b);
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut bw = copy_bandwidth_from_timing(n_elems, reps, seconds);
    bw.checksum = b[n_elems / 2] + b[n_elems - 1];
    Ok(bw)
}

/// `sum += a[i]` over `n_elems` doubles, `reps` times.
pub fn microbench_read_sum(n_elems: usize, reps: usize, threads: usize) -> Result<Bandwidth> {
    check(n_elems, reps, threads)?;
    let a: Vec<f64> = (0..n_elems).map(|i| (i % 1024) as f64).collect();
    let pool = pool(threads)?;
    let block = n_elems.div_ceil(threads);

    let run = |a: &[f64]| pool.install(|| a.par_chunks(block).map(sum_block).sum::<f64>());
    let mut checksum = run(&a);
    let start = Instant::now();
    for _ in 0..reps {
        checksum += std::hint::black_box(run(std::hint::black_box(&a)));
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut bw = read_bandwidth_from_timing(n_elems, reps, seconds);
    bw.checksum = checksum;
    Ok(bw)
}

fn check(n_elems: usize, reps: usize, threads: usize) -> Result<()> {
    if n_elems == 0 || reps == 0 || threads == 0 {
        return Err(param(
            "array size, repetitions and threads must all be positive",
        ));
    }
    Ok(())
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| param(format!("cannot start thread pool: {e}")))
}

#[inline(never)]
fn copy_block(dst: &mut [f64], src: &[f64]) {
    // `+ 0.0` keeps the loop from being lowered to memcpy, which may switch
    // to non-temporal stores for large arrays
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = s + 0.0;
    }
}

#[inline(never)]
fn sum_block(a: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let blocks = a.chunks_exact(8);
    let rem = blocks.remainder();
    for b in blocks {
        for k in 0..8 {
            acc[k] += b[k];
        }
    }
    acc.iter().sum::<f64>() + rem.iter().sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_size_strings() {
        assert_eq!(parse_cache_size("107520K\n"), Some(107520 << 10));
        assert_eq!(parse_cache_size("8M"), Some(8 << 20));
        assert_eq!(parse_cache_size("512"), Some(512));
        assert_eq!(parse_cache_size("lots"), None);
    }

    #[test]
    fn read_arithmetic() {
        let bw = read_bandwidth_from_timing(1_000_000, 10, 0.5);
        assert_eq!(bw.loop_bytes_per_rep, 8_000_000);
        assert_eq!(bw.raw_gbps, 8e6 * 10.0 / 0.5 / 1e9);
        assert_eq!(bw.corrected_gbps, bw.raw_gbps);
    }

    #[test]
    fn copy_corrected_is_one_and_a_half_raw() {
        let bw = copy_bandwidth_from_timing(1_000_000, 4, 0.25);
        assert_eq!(bw.loop_bytes_per_rep, 16_000_000);
        assert_eq!(bw.raw_gbps, 16e6 * 4.0 / 0.25 / 1e9);
        assert_eq!(bw.corrected_gbps, bw.raw_gbps * 1.5);
    }

    #[test]
    fn small_runs_and_checksums() {
        let bw = microbench_read_sum(10_000, 3, 2).unwrap();
        let expect: f64 = (0..10_000).map(|i| (i % 1024) as f64).sum();
        assert_eq!(bw.checksum, 4.0 * expect);
        assert!(bw.raw_gbps > 0.0);
        let bw = microbench_copy(10_001, 2, 3).unwrap();
        assert_eq!(bw.checksum, (5000 % 1024) as f64 + (10_000 % 1024) as f64);
        assert_eq!(bw.corrected_gbps, bw.raw_gbps * WRITE_ALLOCATE_FACTOR);
    }

    #[test]
    fn rejects_zero_sizes() {
        assert!(microbench_copy(0, 1, 1).is_err());
        assert!(microbench_read_sum(10, 0, 1).is_err());
        assert!(microbench_read_sum(10, 1, 0).is_err());
    }
}
