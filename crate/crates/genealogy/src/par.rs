//! Data-parallel helpers with a sequential fallback.
//!
//! With the default `parallel` feature the loops below fan out over rayon;
//! without it they run sequentially. Callers are written so both paths
//! produce identical results: work units are indexed, seeds derive from the
//! index, and reductions are order-insensitive.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f)` collected in index order.
pub(crate) fn indexed_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Fold `(0..n)` into per-worker accumulators and merge them.
/// `merge` must be associative and commutative.
pub(crate) fn indexed_fold<A, F, M>(n: usize, init: impl Fn() -> A + Sync + Send, step: F, merge: M) -> A
where
    A: Send,
    F: Fn(A, usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .fold(&init, &step)
            .reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        (0..n).fold(init(), step)
    }
}
