//! Data-parallel batch mapping with a sequential fallback.
//!
//! Batch work (instance generation, scoring, solving, grading) maps
//! independently over items, so it runs on rayon when the `parallel` feature
//! is enabled and falls back to a plain iterator otherwise. Results are
//! returned in input order in both modes, which keeps batch outputs
//! independent of worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving input order.
#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, preserving input order.
#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Maps `f` over the index range `0..n`, preserving index order.
#[cfg(feature = "parallel")]
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over the index range `0..n`, preserving index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Caps the global worker pool. A best-effort call: it must run before any
/// parallel work and is ignored (with `Err`) once the pool exists. No-op
/// without the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn set_jobs(jobs: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn set_jobs(_jobs: usize) -> Result<(), String> {
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..257).collect();
        let mapped = map_ordered(&items, |x| x * 2);
        assert_eq!(mapped, items.iter().map(|x| x * 2).collect::<Vec<_>>());
        let by_index = map_indices(257, |i| i as u64 * 2);
        assert_eq!(by_index, mapped);
    }
}
