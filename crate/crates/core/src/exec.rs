//! Process-wide choice between data-parallel and sequential evaluation.
//!
//! Without the `parallel` feature every request runs sequentially. Results
//! are identical under both strategies; only wall time differs.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    Parallel,
}

const SEQUENTIAL: u8 = 0;
const PARALLEL: u8 = 1;

static STRATEGY: AtomicU8 = AtomicU8::new(if cfg!(feature = "parallel") {
    PARALLEL
} else {
    SEQUENTIAL
});

pub fn strategy() -> Strategy {
    match STRATEGY.load(Ordering::Relaxed) {
        PARALLEL if cfg!(feature = "parallel") => Strategy::Parallel,
        _ => Strategy::Sequential,
    }
}

pub fn set_strategy(s: Strategy) {
    let v = match s {
        Strategy::Sequential => SEQUENTIAL,
        Strategy::Parallel => PARALLEL,
    };
    STRATEGY.store(v, Ordering::Relaxed);
}

/// `(0..n).map(f)` in index order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy() == Strategy::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f)` in input order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy() == Strategy::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}
