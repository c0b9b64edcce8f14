//! Data-parallel scans over the matching set.
//!
//! Every heavy operation in this crate (intersection tensors, sphere scans,
//! odd-cut counting) is a fold over all (2n−1)!! matchings. The fold is
//! partitioned into contiguous rank chunks; chunks are processed
//! independently and merged **in rank order**, so the result is identical
//! for any worker count — including the sequential fallback built without
//! the `parallel` feature.

use crate::error::Result;
use crate::matching::Matching;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ranks per chunk. Large enough to amortize unranking, small enough to
/// load-balance at n = 7 (135,135 ranks → ~17 chunks per worker on 8 cores).
pub const DEFAULT_CHUNK: u64 = 1024;

/// Folds `step` over all matchings of K_2n in rank order.
///
/// `init` creates a per-chunk accumulator, `step` consumes one matching,
/// and `merge` combines chunk results; merging happens in ascending chunk
/// order regardless of scheduling.
pub fn fold_matchings<T, I, S, M>(n: usize, init: I, step: S, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    S: Fn(&mut T, u64, &Matching) + Sync,
    M: Fn(T, T) -> T,
{
    #[cfg(feature = "parallel")]
    {
        fold_matchings_par(n, init, step, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        fold_matchings_seq(n, init, step, merge)
    }
}

/// Sequential fold, always available. The parallel path must agree with
/// this one bit for bit; the bench suite compares their throughput.
pub fn fold_matchings_seq<T, I, S, M>(n: usize, init: I, step: S, _merge: M) -> Result<T>
where
    I: Fn() -> T,
    S: Fn(&mut T, u64, &Matching),
    M: Fn(T, T) -> T,
{
    let count = Matching::enumerable_count(n)?;
    let mut acc = init();
    for r in 0..count {
        let m = Matching::unrank(n, r).expect("rank in range");
        step(&mut acc, r, &m);
    }
    Ok(acc)
}

/// Rayon fold over rank chunks.
#[cfg(feature = "parallel")]
pub fn fold_matchings_par<T, I, S, M>(n: usize, init: I, step: S, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    S: Fn(&mut T, u64, &Matching) + Sync,
    M: Fn(T, T) -> T,
{
    let count = Matching::enumerable_count(n)?;
    let chunks: Vec<(u64, u64)> = (0..count)
        .step_by(DEFAULT_CHUNK as usize)
        .map(|lo| (lo, (lo + DEFAULT_CHUNK).min(count)))
        .collect();
    let partials: Vec<T> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut acc = init();
            for r in lo..hi {
                let m = Matching::unrank(n, r).expect("rank in range");
                step(&mut acc, r, &m);
            }
            acc
        })
        .collect();
    Ok(partials
        .into_iter()
        .reduce(merge)
        .unwrap_or_else(init))
}

/// Maps `f` over `0..count`, preserving index order in the output.
pub fn par_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Counts matchings satisfying a predicate.
pub fn count_matchings<P>(n: usize, pred: P) -> Result<u64>
where
    P: Fn(u64, &Matching) -> bool + Sync,
{
    fold_matchings(
        n,
        || 0u64,
        |acc, r, m| {
            if pred(r, m) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )
}
