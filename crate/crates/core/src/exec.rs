//! Execution strategy for the data-parallel loops (per-record scoring,
//! pairwise year tests, corpus generation).
//!
//! With the `parallel` feature the work is spread over the current rayon
//! pool; without it every strategy runs sequentially. Results are always
//! returned in input order, so output never depends on the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if Self::parallel_available() {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Order-preserving map with per-worker scratch state (caches, buffers).
    pub fn map_init<T, R, S, I, F>(self, items: &[T], init: I, f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, &T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map_init(init, f).collect(),
            _ => {
                let mut state = init();
                items.iter().map(|t| f(&mut state, t)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Exec;

    #[test]
    fn strategies_agree_and_keep_order() {
        let items: Vec<u64> = (0..10_000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * x);
        let par = Exec::Parallel.map(&items, |x| x * x);
        assert_eq!(seq, par);
        let seq = Exec::Sequential.map_init(
            &items,
            || 0u64,
            |acc, x| {
                *acc += 1;
                x + 1
            },
        );
        let par = Exec::Parallel.map_init(&items, || 0u64, |_, x| x + 1);
        assert_eq!(seq, par);
    }
}
