//! Execution strategy for the data-parallel loops (automorphism candidates,
//! brute-force enumeration, starter restarts).
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon pool; without it every strategy runs sequentially. Results never
//! depend on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Whether this strategy actually runs on multiple threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// `(0..n).filter_map(f).collect()`, order preserved.
pub(crate) fn filter_map_range<T, F>(strategy: Strategy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy == Strategy::Parallel {
        return (0..n).into_par_iter().filter_map(f).collect();
    }
    let _ = strategy;
    (0..n).filter_map(f).collect()
}

/// First `i` in `0..n` (by index, not by completion time) with `f(i)` some.
pub(crate) fn find_map_first<T, F>(strategy: Strategy, n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy == Strategy::Parallel {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = strategy;
    (0..n).find_map(f)
}

/// `(0..n).map(f).collect()`, order preserved.
pub(crate) fn map_range<T, F>(strategy: Strategy, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    filter_map_range(strategy, n, |i| Some(f(i)))
}
