//! Matrix Market ingestion, synthetic generators and the binary SELL cache.

pub mod generators;
pub mod mtx;
pub mod sellcache;

pub use generators::{gen_banded, gen_dense, gen_random, gen_skewed, gen_worst_case};
pub use mtx::{
    read_matrix_market, read_matrix_market_from, write_matrix_market, MatrixMarketHeader,
};
pub use sellcache::{
    read_sell_cache, read_sell_cache_from, write_sell_cache, write_sell_cache_to,
    SELL_CACHE_VERSION,
};
