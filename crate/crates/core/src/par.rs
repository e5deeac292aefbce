//! Switch between rayon and plain iterators.
//!
//! Every data-parallel loop in the crate goes through these helpers so the
//! `parallel` feature can be turned off without touching call sites, and so
//! benchmarks can compare both paths inside one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, and falls back to
    /// sequential execution otherwise.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `0..n` and folds the results with an associative `reduce`.
pub fn map_reduce<T, I, M, R>(exec: Execution, n: usize, identity: I, map: M, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(map).reduce(identity, reduce);
    }
    let _ = exec;
    (0..n).map(map).fold(identity(), reduce)
}

/// Maps `0..n` into a vector, preserving index order.
pub fn map_collect<T, M>(exec: Execution, n: usize, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(map).collect();
    }
    let _ = exec;
    (0..n).map(map).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let s = map_reduce(exec, 1000, || 0u64, |i| i as u64 * 3, |a, b| a + b);
            assert_eq!(s, 3 * 999 * 1000 / 2);
            let v = map_collect(exec, 5, |i| i * i);
            assert_eq!(v, vec![0, 1, 4, 9, 16]);
        }
    }
}
