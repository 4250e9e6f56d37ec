use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::Serialize;

use crate::error::{param, Result};
use crate::matrix::MatrixStats;

/// Row-length variation above which dynamic scheduling is preferred for
/// matrices that do not fit in the last-level cache.
pub const ZETA_THRESHOLD: f64 = 0.4;

/// Work distribution across workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Schedule {
    /// Contiguous, equally sized blocks of rows (CRS) or chunks (SELL).
    Static,
    /// Single rows or chunks handed out dynamically.
    Guided1,
}

impl std::fmt::Display for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Schedule::Static => "static",
            Schedule::Guided1 => "guided1",
        })
    }
}

/// Static if the matrix fits in the LLC or its rows are regular, guided
/// otherwise.
pub fn choose_scheduling(stats: &MatrixStats, llc_bytes: usize) -> Schedule {
    if stats.footprint_bytes <= llc_bytes || stats.zeta < ZETA_THRESHOLD {
        Schedule::Static
    } else {
        Schedule::Guided1
    }
}

/// Thread pool plus the schedule kernels run under.
pub struct Executor {
    pool: Option<ThreadPool>,
    threads: usize,
    schedule: Schedule,
}

impl Executor {
    pub fn new(threads: usize, schedule: Schedule) -> Result<Self> {
        if threads == 0 {
            return Err(param("thread count must be at least 1"));
        }
        let pool = if threads > 1 {
            Some(
                ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| param(format!("cannot start thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self {
            pool,
            threads,
            schedule,
        })
    }

    pub fn serial() -> Self {
        Self {
            pool: None,
            threads: 1,
            schedule: Schedule::Static,
        }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    /// Runs `f` on the pool, or inline when single-threaded.
    pub(crate) fn pool(&self) -> Option<&ThreadPool> {
        self.pool.as_ref()
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("threads", &self.threads)
            .field("schedule", &self.schedule)
            .finish()
    }
}
