//! Copy and read-only memory bandwidth, sized past the last-level cache.

use sellkit::model::{llc_bytes_or_default, microbench_copy, microbench_read_sum};

fn main() -> sellkit::Result<()> {
    let llc = llc_bytes_or_default();
    let n_elems = 4 * llc / 8;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!(
        "LLC {} MiB, arrays of {} MiB, {threads} threads",
        llc >> 20,
        (n_elems * 8) >> 20
    );

    let copy = microbench_copy(n_elems, 5, threads)?;
    println!(
        "copy: {:.2} GB/s loop traffic, {:.2} GB/s with write-allocate",
        copy.raw_gbps, copy.corrected_gbps
    );
    let read = microbench_read_sum(n_elems, 5, threads)?;
    println!("read: {:.2} GB/s", read.raw_gbps);
    Ok(())
}
