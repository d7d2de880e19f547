//! Farming independent samples out to workers.
//!
//! Sample `i` of a run always sees the same derived seed, and results come
//! back in index order, so the output is identical for any worker count and
//! with or without the `parallel` feature.

/// Evaluates `f(0), ..., f(count - 1)` on the calling thread.
pub fn map_sequential<T, F>(count: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..count).map(f).collect()
}

/// Evaluates `f(0), ..., f(count - 1)` on the current rayon pool, in index order.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

/// Dispatches to [`map_parallel`] when the `parallel` feature is on.
pub fn map_samples<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(count, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(count, f)
    }
}

/// Number of indices in `0..count` for which `hit` holds.
pub fn count_hits<F>(count: u64, hit: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().filter(|&i| hit(i)).count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).filter(|&i| hit(i)).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_sequential(1000, |i| i * i);
        assert_eq!(map_samples(1000, |i| i * i), seq);
        assert_eq!(count_hits(1000, |i| i % 3 == 0), 334);
    }
}
