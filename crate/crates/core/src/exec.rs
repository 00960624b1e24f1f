//! Execution strategy for the data-parallel loops of the crate.
//!
//! Every parallel loop in the crate is written once against [`Strategy`].
//! Without the `parallel` feature, [`Strategy::Parallel`] degrades to the
//! sequential path, so results never depend on the build configuration.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether work will actually be spread over a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Maps `f` over `lo..hi`, preserving order.
pub fn map_range<R, F>(strategy: Strategy, lo: usize, hi: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return (lo..hi).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (lo..hi).map(f).collect()
}

/// Runs `f` on every item for its side effects.
pub fn for_each<T, F>(strategy: Strategy, items: &[T], f: F)
where
    T: Sync,
    F: Fn(&T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        items.par_iter().for_each(f);
        return;
    }
    let _ = strategy;
    items.iter().for_each(f);
}

/// Sizes the global worker pool. Only the first call has an effect; later
/// calls (and builds without the `parallel` feature) are no-ops.
pub fn configure_threads(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}
