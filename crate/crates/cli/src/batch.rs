//! Bounded parallel execution of independent runs.
//!
//! Each run is self-seeded, so execution order cannot affect results; the
//! output vector is always in config order regardless of worker count.

use anyhow::{Context, Result};
use rayon::prelude::*;

use mwng_core::engine::{self, RunResult, SimConfig};

/// Executes every config, fanning out across at most `jobs` workers
/// (`jobs <= 1` runs sequentially on the calling thread). Results come back
/// in config order either way.
pub fn run_all(configs: &[SimConfig], jobs: usize) -> Result<Vec<RunResult>> {
    if jobs <= 1 {
        return configs
            .iter()
            .map(|cfg| engine::run(cfg).map_err(Into::into))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")?;
    pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| engine::run(cfg).map_err(Into::into))
            .collect()
    })
}
