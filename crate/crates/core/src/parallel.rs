//! Deterministic fork-join helper: results are merged in input order, so the
//! output is identical for any worker count.

/// Applies `f` to every item, using up to `jobs` worker threads. `jobs <= 1`
/// runs inline.
pub fn ordered_map<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let workers = jobs.min(items.len());
    let chunk_size = items.len().div_ceil(workers);
    let fref = &f;
    let results: Vec<Vec<R>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk_size)
            .map(|chunk| scope.spawn(move || chunk.iter().map(fref).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    results.into_iter().flatten().collect()
}
