use rayon::prelude::*;

/// Evaluate `f(0..count)` on a pool of `workers` threads (0 = one per core)
/// and return the results in index order. The output never depends on the
/// worker count as long as `f` is a pure function of its index.
pub fn map_indexed<T, F>(workers: usize, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if workers == 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to start worker pool");
    pool.install(|| (0..count).into_par_iter().map(f).collect())
}
