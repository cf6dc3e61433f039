//! Parallel scan driver.

use hyperk3_core::search::{canonical_sort, candidates, evaluate, Candidate, Family, SearchEntry};
use rayon::prelude::*;

use crate::CliError;

/// Worker count from `HYPERK3_THREADS`, `None` for the rayon default.
pub fn thread_cap() -> Option<usize> {
    std::env::var("HYPERK3_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Evaluate the candidates on a pool capped by `HYPERK3_THREADS` and sort
/// the survivors canonically. The result does not depend on the worker
/// count.
pub fn evaluate_all(cands: &[Candidate]) -> Result<Vec<SearchEntry>, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Internal(e.to_string()))?;
    let found: Vec<Option<SearchEntry>> =
        pool.install(|| cands.par_iter().map(evaluate).collect::<hyperk3_core::Result<Vec<_>>>())?;
    let mut out: Vec<SearchEntry> = found.into_iter().flatten().collect();
    canonical_sort(&mut out);
    Ok(out)
}

/// One family, optionally restricted to a single `Ψ` index.
pub fn scan_family(family: Family, psi_index: Option<usize>) -> Result<Vec<SearchEntry>, CliError> {
    evaluate_all(&candidates(family, psi_index)?)
}
