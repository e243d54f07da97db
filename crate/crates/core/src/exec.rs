//! Index-ordered map used by every sweep in the crate.
//!
//! Implementations may evaluate `f` in any order or concurrently, but must
//! return the results in index order. Callers merge in that order, so
//! outputs never depend on scheduling.

use alloc::vec::Vec;

pub trait Executor {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
