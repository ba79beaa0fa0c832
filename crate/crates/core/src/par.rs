//! Sequential / rayon dispatch for the data-parallel loops in the crate.
//!
//! Every parallel path maps independent items and collects in input order, so
//! results do not depend on the execution strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How data-parallel loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    /// Parallel when the feature is on and rayon has more than one worker.
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            if rayon::current_num_threads() > 1 {
                Execution::Parallel
            } else {
                Execution::Sequential
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// All strategies compiled into this build.
    pub fn available() -> &'static [Execution] {
        #[cfg(feature = "parallel")]
        {
            &[Execution::Sequential, Execution::Parallel]
        }
        #[cfg(not(feature = "parallel"))]
        {
            &[Execution::Sequential]
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Execution::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Execution::Parallel => "parallel",
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// Fallible ordered map; returns the first error in input order.
pub fn try_map<T, R, E, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(exec, items, f).into_iter().collect()
}

/// Smallest number of rows handed to one rayon task; keeps the per-column
/// fork-join of small LU trailing blocks cheap.
#[cfg(feature = "parallel")]
const MIN_ROWS_PER_TASK: usize = 32;

/// Applies `f(row_index, row)` to each `width`-sized row of `data`.
pub fn for_each_row<F>(exec: Execution, data: &mut [f64], width: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    if width == 0 {
        return;
    }
    match exec {
        Execution::Sequential => data
            .chunks_mut(width)
            .enumerate()
            .for_each(|(i, row)| f(i, row)),
        #[cfg(feature = "parallel")]
        Execution::Parallel => data
            .par_chunks_mut(width)
            .with_min_len(MIN_ROWS_PER_TASK)
            .enumerate()
            .for_each(|(i, row)| f(i, row)),
    }
}
