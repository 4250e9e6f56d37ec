//! Replays the RHS access stream of an SpMV kernel through a fully
//! associative LRU cache to estimate main-memory traffic without hardware
//! counters.
//!
//! Matrix values and indices are streamed and counted in full (padding
//! included); the LHS costs one 8-byte read and one 8-byte write per matrix
//! row. Only accesses to `x` go through the cache. The model is optimistic:
//! no conflict misses and no interference from the streamed arrays.

use serde::Serialize;

use crate::error::{param, Result};
use crate::kernels::Kernel;
use crate::matrix::sell::{INDEX_BYTES, VALUE_BYTES};

const NIL: u32 = u32::MAX;

/// Fully associative LRU cache over a bounded universe of line ids, with O(1)
/// access via an intrusive doubly linked list.
#[derive(Debug, Clone)]
pub struct LruCache {
    capacity: usize,
    len: usize,
    head: u32,
    tail: u32,
    prev: Vec<u32>,
    next: Vec<u32>,
    resident: Vec<bool>,
    misses: u64,
}

impl LruCache {
    /// `capacity` lines, for line ids in `0..universe`.
    pub fn new(capacity: usize, universe: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            len: 0,
            head: NIL,
            tail: NIL,
            prev: vec![NIL; universe],
            next: vec![NIL; universe],
            resident: vec![false; universe],
            misses: 0,
        }
    }

    /// Touches `line`; returns true on a hit.
    pub fn access(&mut self, line: u32) -> bool {
        if self.resident[line as usize] {
            if self.head != line {
                self.unlink(line);
                self.push_front(line);
            }
            return true;
        }
        self.misses += 1;
        if self.len == self.capacity {
            let victim = self.tail;
            self.unlink(victim);
            self.resident[victim as usize] = false;
            self.len -= 1;
        }
        self.push_front(line);
        self.resident[line as usize] = true;
        self.len += 1;
        false
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    fn unlink(&mut self, line: u32) {
        let (p, n) = (self.prev[line as usize], self.next[line as usize]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
    }

    fn push_front(&mut self, line: u32) {
        self.prev[line as usize] = NIL;
        self.next[line as usize] = self.head;
        if self.head != NIL {
            self.prev[self.head as usize] = line;
        }
        self.head = line;
        if self.tail == NIL {
            self.tail = line;
        }
    }
}

/// Simulated memory traffic of one SpMV, in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Traffic {
    pub matrix_bytes: u64,
    pub rhs_bytes: u64,
    pub lhs_bytes: u64,
}

impl Traffic {
    pub fn total(&self) -> u64 {
        self.matrix_bytes + self.rhs_bytes + self.lhs_bytes
    }
}

/// Total memory traffic of one multiplication with `kernel` when `x` is
/// served by an LRU cache of `cache_bytes` with `line_bytes` lines.
pub fn simulate_rhs_traffic(
    kernel: Kernel<'_>,
    cache_bytes: usize,
    line_bytes: usize,
) -> Result<Traffic> {
    if !line_bytes.is_power_of_two() || line_bytes < VALUE_BYTES {
        return Err(param(format!(
            "line size {line_bytes} must be a power of two >= 8"
        )));
    }
    if cache_bytes < line_bytes || !cache_bytes.is_multiple_of(line_bytes) {
        return Err(param(format!(
            "cache size {cache_bytes} must be a positive multiple of the line size"
        )));
    }
    let elems_per_line = (line_bytes / VALUE_BYTES) as u32;
    let universe = kernel.x_len().div_ceil(elems_per_line as usize).max(1);
    let mut cache = LruCache::new(cache_bytes / line_bytes, universe);
    let slot_bytes = (VALUE_BYTES + INDEX_BYTES) as u64;

    let (slots, rows) = match kernel {
        Kernel::Crs(m) | Kernel::CrsUnrolled(m) => {
            for &c in &m.col {
                cache.access(c / elems_per_line);
            }
            (m.nnz(), m.n_rows)
        }
        Kernel::Sell(m) => {
            // storage order: chunk by chunk, column by column, lane by lane.
            // Padding slots all read x[0] and are charged through the matrix
            // term only.
            let c = m.chunk_height();
            let lens = m.row_lengths();
            for (i, w) in m.cs().windows(2).enumerate() {
                let lanes = &lens[i * c..(i + 1) * c];
                for (j, slots) in m.col()[w[0]..w[1]].chunks_exact(c).enumerate() {
                    for (&col, &len) in slots.iter().zip(lanes) {
                        if (j as u32) < len {
                            cache.access(col / elems_per_line);
                        }
                    }
                }
            }
            (m.storage_slots(), m.n_rows())
        }
    };
    Ok(Traffic {
        matrix_bytes: slots as u64 * slot_bytes,
        rhs_bytes: cache.misses() * line_bytes as u64,
        lhs_bytes: rows as u64 * 2 * VALUE_BYTES as u64,
    })
}
