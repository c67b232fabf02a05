//! Trial execution: rayon when the `parallel` feature is enabled, a plain
//! loop otherwise. Both strategies return results in index order.

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// Work-stealing across the rayon thread pool. Falls back to
    /// [`Execution::Sequential`] when built without the `parallel` feature.
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Maps `f` over `0..n`, preserving index order in the output.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let f = |i: usize| i * i;
        let par = Execution::Parallel.map(1000, f);
        let seq = Execution::Sequential.map(1000, f);
        assert_eq!(par, seq);
        assert_eq!(seq[31], 961);
    }
}
