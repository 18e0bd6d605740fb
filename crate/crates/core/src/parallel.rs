//! Thin shims over rayon so every analysis has a sequential twin.
//!
//! The rules that keep parallel results bit-identical to the sequential
//! build: reductions over floats go through `ordered_map` (collect in input
//! order, fold sequentially), and `fold_exact` is reserved for accumulators
//! whose merge is exactly associative and commutative (integer adds).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, preserving index order in the output.
pub(crate) fn ordered_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
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

/// Fold `0..n` into an accumulator and merge the per-thread partials.
///
/// Only valid when `merge` commutes exactly (integer accumulators); the
/// merge order is unspecified under the `parallel` feature.
pub(crate) fn fold_exact<A, Make, Fold, Merge>(n: usize, make: Make, fold: Fold, merge: Merge) -> A
where
    A: Send,
    Make: Fn() -> A + Sync + Send,
    Fold: Fn(&mut A, usize) + Sync + Send,
    Merge: Fn(&mut A, A) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .fold(&make, |mut acc, i| {
                fold(&mut acc, i);
                acc
            })
            .reduce(&make, |mut a, b| {
                merge(&mut a, b);
                a
            })
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        let mut acc = make();
        for i in 0..n {
            fold(&mut acc, i);
        }
        acc
    }
}

/// Sort a slice, in parallel when the feature is on. Deterministic either way.
pub(crate) fn sort_unstable_by<T, F>(items: &mut [T], cmp: F)
where
    T: Send,
    F: Fn(&T, &T) -> std::cmp::Ordering + Sync,
{
    #[cfg(feature = "parallel")]
    items.par_sort_unstable_by(cmp);
    #[cfg(not(feature = "parallel"))]
    items.sort_unstable_by(cmp);
}
