//! Data-parallel fan-out helpers.
//!
//! With the default `parallel` feature the workload is spread over rayon's
//! pool; without it the same helpers run sequentially. Results come back in
//! input order either way, so callers are deterministic regardless of the
//! feature and of thread scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Splits `0..total` into contiguous ranges suitable for [`map`].
pub fn chunk_ranges(total: u64, target_chunks: usize) -> Vec<(u64, u64)> {
    if total == 0 {
        return Vec::new();
    }
    let chunks = (target_chunks.max(1) as u64).min(total);
    let base = total / chunks;
    let rem = total % chunks;
    let mut ranges = Vec::with_capacity(chunks as usize);
    let mut lo = 0;
    for i in 0..chunks {
        let len = base + u64::from(i < rem);
        ranges.push((lo, lo + len));
        lo += len;
    }
    ranges
}
