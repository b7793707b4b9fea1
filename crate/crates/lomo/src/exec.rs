//! Thread-pool executor backed by rayon.

use lomo_core::Executor;
use rayon::prelude::*;

/// Runs tasks on a dedicated pool. Results keep task order.
#[derive(Debug)]
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `jobs == 0` uses one worker per available core.
    pub fn new(jobs: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
        Ok(Parallel { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Parallel {
    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..tasks).into_par_iter().map(f).collect())
    }
}
