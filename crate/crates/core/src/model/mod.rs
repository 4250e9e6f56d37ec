//! Roofline performance model for SpMV: code balance, bounds, RHS traffic
//! inference, a cache simulator standing in for hardware counters, and the
//! bandwidth microbenchmarks that supply `b`.

mod balance;
mod cachesim;
mod microbench;

pub use balance::{
    code_balance_crs, code_balance_sell, infer_alpha, roofline, upper_bound_gflops, AlphaEstimate,
    AlphaQuality, ModelParams, ModelResult,
};
pub use cachesim::{simulate_rhs_traffic, LruCache, Traffic};
pub use microbench::{
    copy_bandwidth_from_timing, detect_llc_bytes, llc_bytes_or_default, microbench_copy,
    microbench_read_sum, parse_cache_size, read_bandwidth_from_timing, Bandwidth,
    DEFAULT_LLC_BYTES, WRITE_ALLOCATE_FACTOR,
};
