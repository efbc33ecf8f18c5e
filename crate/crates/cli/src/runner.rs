//! Deterministic fan-out over independent work units.
//!
//! `par_map` evaluates `f(0), ..., f(count-1)` across `OBLIVCH_WORKERS`
//! threads and returns results in index order. Work units must be
//! self-seeding (derive their stream from the unit index), and callers must
//! reduce floating-point results serially from the ordered vector, so the
//! output is identical for any worker count.

/// Worker count from `OBLIVCH_WORKERS`, defaulting to available
/// parallelism capped at 8.
pub fn worker_count() -> usize {
    if let Ok(v) = std::env::var("OBLIVCH_WORKERS") {
        if let Ok(w) = v.trim().parse::<usize>() {
            if w >= 1 {
                return w;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// Ordered parallel map over `0..count`.
pub fn par_map<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = worker_count().min(count.max(1) as usize);
    if workers <= 1 {
        return (0..count).map(f).collect();
    }
    let mut results: Vec<Option<T>> = (0..count).map(|_| None).collect();
    let chunk = (count as usize).div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in results.chunks_mut(chunk).enumerate() {
            let f = &f;
            let start = (w * chunk) as u64;
            scope.spawn(move || {
                for (off, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(start + off as u64));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.expect("worker filled every slot"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_index_order() {
        let got = par_map(100, |i| i * i);
        let want: Vec<u64> = (0..100).map(|i| i * i).collect();
        assert_eq!(got, want);
        assert_eq!(par_map(0, |i| i), Vec::<u64>::new());
        assert_eq!(par_map(1, |i| i + 5), vec![5]);
    }
}
