//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature disabled every strategy runs sequentially, so
//! results never depend on the feature set.

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run loops in parallel.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `out[i] = f(i)` for `i in 0..out.len()`.
pub(crate) fn fill<F>(exec: Execution, out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
        }
        _ => out.iter_mut().enumerate().for_each(|(i, o)| *o = f(i)),
    }
}

/// Maps `f` over `items`, preserving order.
pub(crate) fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Minimum of `f(i)` over `0..n`.
pub(crate) fn min_over<F>(exec: Execution, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .with_min_len(4096)
                .map(f)
                .reduce(|| f64::INFINITY, f64::min)
        }
        _ => (0..n).map(f).fold(f64::INFINITY, f64::min),
    }
}

/// Runs `op` on a pool capped at `threads` workers; `None` uses the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
        {
            return pool.install(op);
        }
    }
    let _ = threads;
    op()
}
