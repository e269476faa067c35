//! Thread-count selection and deterministic data-parallel helpers.
//!
//! Work is always partitioned by element index and every random stream is
//! keyed by (seed, element index), so results are byte-identical for any
//! thread count. `SPINSIM_THREADS` overrides the detected core count.

/// Number of worker threads: `SPINSIM_THREADS` if set, else all cores.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("SPINSIM_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Apply `f` to disjoint chunks of `data` across worker threads. The chunk
/// handler receives the starting element index so callers can derive
/// per-element RNG streams.
pub fn for_chunks_mut<T, F>(data: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    let threads = thread_count().min(data.len().max(1));
    if threads <= 1 || data.len() < 2 {
        f(0, data);
        return;
    }
    let chunk = data.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (k, part) in data.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || f(k * chunk, part));
        }
    });
}
