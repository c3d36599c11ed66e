//! Deterministic chunked reductions.
//!
//! Work items `0..n_items` are split into at most [`MAX_CHUNKS`] contiguous
//! chunks whose boundaries depend only on `n_items`. Each chunk is folded
//! sequentially into its own accumulator and the accumulators are combined in
//! chunk order, so the floating-point result does not depend on the thread
//! count or on scheduling.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

pub(crate) const MAX_CHUNKS: usize = 64;

pub(crate) fn chunk_ranges(n_items: usize, max_chunks: usize) -> Vec<Range<usize>> {
    if n_items == 0 {
        return Vec::new();
    }
    let chunks = n_items.min(max_chunks.max(1));
    let base = n_items / chunks;
    let extra = n_items % chunks;
    let mut out = Vec::with_capacity(chunks);
    let mut start = 0;
    for i in 0..chunks {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Maps every chunk of `0..n_items` to a value, preserving chunk order.
pub(crate) fn map_chunks<T, F>(n_items: usize, max_chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let ranges = chunk_ranges(n_items, max_chunks);
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        ranges.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "std"))]
    {
        ranges.into_iter().map(f).collect()
    }
}

/// Sums per-chunk vectors of length `len` produced by `f`.
pub(crate) fn sum_vectors<F>(n_items: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(Range<usize>, &mut [f64]) + Sync + Send,
{
    let partials = map_chunks(n_items, MAX_CHUNKS, |range| {
        let mut acc = vec![0.0; len];
        f(range, &mut acc);
        acc
    });
    let mut total = vec![0.0; len];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += *p;
        }
    }
    total
}
