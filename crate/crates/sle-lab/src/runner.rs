//! Sample-level parallelism with results that do not depend on the thread
//! count: sample `i` of a stream draws from its own seed and results are
//! collected in index order.

use rayon::prelude::*;
use sle_core::seed::{sample_seed, tagged_seed};

use crate::LabError;

#[derive(Debug)]
pub struct Runner {
    pool: rayon::ThreadPool,
    seed: u64,
}

impl Runner {
    /// `threads = 0` uses rayon's default.
    pub fn new(seed: u64, threads: usize) -> Result<Self, LabError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| LabError::invalid("threads", e.to_string()))?;
        Ok(Self { pool, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Seed of sample `index` in the stream named `tag`.
    pub fn sample_seed(&self, tag: &str, index: usize) -> u64 {
        sample_seed(tagged_seed(self.seed, tag), index as u64)
    }

    /// Runs `f(index, seed)` for `index` in `range`, in parallel, in order.
    pub fn map<T, F>(&self, tag: &str, range: std::ops::Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, u64) -> T + Sync + Send,
    {
        let stream = tagged_seed(self.seed, tag);
        self.pool.install(|| {
            range
                .into_par_iter()
                .map(|i| f(i, sample_seed(stream, i as u64)))
                .collect()
        })
    }

    /// As [`Runner::map`] over `0..n`, failing on the first error by index.
    pub fn try_map<T, F>(&self, tag: &str, n: usize, f: F) -> Result<Vec<T>, LabError>
    where
        T: Send,
        F: Fn(usize, u64) -> Result<T, LabError> + Sync + Send,
    {
        self.map(tag, 0..n, f).into_iter().collect()
    }
}
