//! Replicate execution across threads. Each permutation replicate is a pure
//! function of the problem and its index, so the thread count changes wall
//! time only, never the results.

use anyhow::{Context, Result};
use dyadnet_core::qap::QapProblem;
use rayon::prelude::*;

/// Caps the global worker pool. Call at most once, before any parallel work.
pub fn install_thread_pool(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("thread pool already initialized")?;
    }
    Ok(())
}

/// Runs every permutation replicate and collects them in index order.
pub fn run_replicates(problem: &QapProblem) -> Vec<Option<Vec<f64>>> {
    (0..problem.permutations())
        .into_par_iter()
        .map(|r| problem.replicate(r))
        .collect()
}
