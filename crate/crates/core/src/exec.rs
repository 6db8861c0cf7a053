//! Execution strategy for the data-parallel loops (sweeps, randomized
//! property checks, batches of LP solves).
//!
//! Results are always returned in input order, so the choice of strategy
//! never changes an answer. Without the `parallel` feature,
//! [`Execution::Parallel`] runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this strategy actually fans out across threads in the
    /// current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluate `f(0), f(1), ..., f(n-1)` and collect in index order.
    pub fn map_indices<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Map over a slice, preserving order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Count indices in `0..n` for which `pred` holds.
    pub fn count_indices<F>(self, n: usize, pred: F) -> usize
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().filter(|&i| pred(i)).count();
        }
        (0..n).filter(|&i| pred(i)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_in_order() {
        let f = |i: usize| (i as f64).sqrt();
        let a = Execution::Sequential.map_indices(1000, f);
        let b = Execution::Parallel.map_indices(1000, f);
        assert_eq!(a, b);
        let xs: Vec<u64> = (0..500).collect();
        assert_eq!(
            Execution::Sequential.map_slice(&xs, |x| x * 3),
            Execution::Parallel.map_slice(&xs, |x| x * 3)
        );
        assert_eq!(
            Execution::Parallel.count_indices(100, |i| i % 7 == 0),
            Execution::Sequential.count_indices(100, |i| i % 7 == 0)
        );
    }
}
