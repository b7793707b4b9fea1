//! Pluggable execution of independent tasks (folds, classes, grid points).
//!
//! Results always come back in task-index order regardless of which worker
//! finished first, so outputs do not depend on scheduling.

use alloc::vec::Vec;

pub trait Executor: Sync {
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs tasks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..tasks).map(f).collect()
    }
}
