//! Execution policy for the data-parallel loops.
//!
//! Every reduction in the crate is split into fixed blocks of [`BLOCK`]
//! items. Blocks are summed pairwise internally and the block partials are
//! then combined pairwise in index order, so the rounding pattern depends
//! only on the item count and never on how many threads ran.

/// Items per reduction block.
pub const BLOCK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Evaluates `f(0..n)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Deterministic blocked pairwise sum of `term(0..n)`.
    pub fn sum<F>(self, n: usize, term: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let blocks = n.div_ceil(BLOCK);
        let partials = self.map(blocks, |b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let terms: Vec<f64> = (lo..hi).map(&term).collect();
            pairwise_sum(&terms)
        });
        pairwise_sum(&partials)
    }

    /// Blocked reduction with a caller-supplied fold. `fold` must be
    /// deterministic; block partials are combined left to right with `join`.
    pub fn reduce<T, F, G>(self, n: usize, fold: F, join: G) -> Option<T>
    where
        T: Send,
        F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
        G: Fn(T, T) -> T,
    {
        let blocks = n.div_ceil(BLOCK);
        let partials = self.map(blocks, |b| {
            let lo = b * BLOCK;
            fold(lo..(lo + BLOCK).min(n))
        });
        pairwise_fold(partials, &join)
    }
}

/// Recursive pairwise summation with a fixed split point.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn pairwise_fold<T, G: Fn(T, T) -> T>(mut items: Vec<T>, join: &G) -> Option<T> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(join(a, b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop()
}
