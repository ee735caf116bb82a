//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature the kernels split their outer loop into chunks
//! processed by rayon; otherwise everything runs on the calling thread.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Applies `work` to chunks of `items` and folds the partial results with
    /// `merge`.  `merge` must be associative and commutative up to the
    /// equality the caller cares about.
    pub fn map_reduce<T, R, W, M>(self, items: &[T], work: W, merge: M) -> R
    where
        T: Sync,
        R: Send + Default,
        W: Fn(&[T]) -> R + Sync + Send,
        M: Fn(R, R) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() && items.len() > 1 && rayon::current_num_threads() > 1 {
            use rayon::prelude::*;
            let chunk = items.len().div_ceil(rayon::current_num_threads() * 4).max(1);
            return items.par_chunks(chunk).map(&work).reduce(R::default, &merge);
        }
        let _ = &merge;
        work(items)
    }
}

/// Runs `f` inside a pool with `threads` workers (no-op without the feature).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}
