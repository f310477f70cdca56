//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon pool; without it both variants run sequentially. Results never
//! depend on the choice: reductions used here are associative and commutative.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually fans out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps every item and folds the results with `reduce`.
pub fn map_reduce<T, R, M, I, F>(items: &[T], exec: Execution, map: M, identity: I, reduce: F) -> R
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
    F: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(map).reduce(identity, reduce);
    }
    let _ = exec;
    items.iter().map(map).fold(identity(), reduce)
}

/// Order-preserving map.
pub fn map_collect<T, R, M>(items: &[T], exec: Execution, map: M) -> Vec<R>
where
    T: Sync,
    R: Send,
    M: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(map).collect();
    }
    let _ = exec;
    items.iter().map(map).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_reduce(&xs, Execution::Sequential, |x| x * x, || 0, |a, b| a + b);
        let par = map_reduce(&xs, Execution::Parallel, |x| x * x, || 0, |a, b| a + b);
        assert_eq!(seq, par);
        assert_eq!(
            map_collect(&xs, Execution::Parallel, |x| x + 1),
            map_collect(&xs, Execution::Sequential, |x| x + 1)
        );
    }
}
