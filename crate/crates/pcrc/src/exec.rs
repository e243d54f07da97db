use pcrc_core::Executor;
use rayon::prelude::*;

/// Runs sweeps on the current rayon pool. Results come back in index order,
/// so output does not depend on the number of threads.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }
}
