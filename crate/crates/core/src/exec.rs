//! Execution strategy for the data-parallel loops (ball enumeration,
//! Monte-Carlo volumes, batched distance evaluations).
//!
//! With the `parallel` feature the [`Execution::Parallel`] strategy runs on
//! the rayon global pool. Without it every strategy runs sequentially, so
//! results never depend on which one was requested.

/// How a batch loop is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
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
    /// True when the loop will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Order-preserving map over a slice.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Order-preserving flat map over a slice.
    pub fn flat_map<T, U, I, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        I: IntoIterator<Item = U>,
        F: Fn(&T) -> I + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items
                .par_iter()
                .flat_map_iter(|t| f(t).into_iter())
                .collect();
        }
        items.iter().flat_map(f).collect()
    }
}
