//! Deterministic parallel reductions.
//!
//! Work is cut into fixed-size chunks independent of the thread count;
//! chunks are reduced in parallel and their partial results are combined
//! sequentially in chunk order, so results are bit-identical for any
//! number of workers.

use std::ops::Range;

use rayon::prelude::*;

/// Items per chunk.
pub const CHUNK: usize = 1024;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "JETMORSE_THREADS";

/// Requested count, else `JETMORSE_THREADS`, else the available parallelism.
pub fn thread_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Maps every chunk of `0..n` (in chunks of `chunk` items) and returns the
/// partial results in chunk order.
pub fn map_chunks<A, F>(n: usize, chunk: usize, threads: Option<usize>, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(usize, Range<usize>) -> A + Sync + Send,
{
    let chunks = n.div_ceil(chunk);
    let range = |c: usize| c * chunk..((c + 1) * chunk).min(n);
    let threads = thread_count(threads);
    if threads <= 1 || chunks <= 1 {
        return (0..chunks).map(|c| f(c, range(c))).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| (0..chunks).into_par_iter().map(|c| f(c, range(c))).collect()),
        Err(_) => (0..chunks).map(|c| f(c, range(c))).collect(),
    }
}
