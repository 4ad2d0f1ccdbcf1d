//! Row-parallel evaluation on a bounded rayon pool.

use homm_ring_core::homm::{check_tolerances, trace_cell, CellTrace};
use homm_ring_core::{ManifoldPointSet, TraceMode, TraceTolerances};
use rayon::prelude::*;

/// Environment variable capping worker threads; `0` or unset means automatic.
pub const THREADS_ENV: &str = "HOMM_RING_THREADS";

/// Reads [`THREADS_ENV`].
pub fn threads_from_env() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(0),
    }
}

/// Runs `f` inside a pool of `threads` workers (0 = rayon default).
pub fn with_pool<T, F>(threads: usize, f: F) -> Result<T, String>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

/// Per-cell traces in row-major order, computed in parallel.
pub fn trace_cells(mode: &TraceMode, tol: &TraceTolerances) -> homm_ring_core::Result<Vec<CellTrace>> {
    check_tolerances(tol)?;
    mode.validate()?;
    Ok(mode
        .cells()
        .into_par_iter()
        .map(|(tau, eta)| trace_cell(mode, tau, eta, tol))
        .collect())
}

/// Parallel counterpart of [`homm_ring_core::trace_manifold`] with identical output.
pub fn trace_manifold(mode: &TraceMode, tol: &TraceTolerances) -> homm_ring_core::Result<ManifoldPointSet> {
    ManifoldPointSet::from_cells(mode.dimensionality(), trace_cells(mode, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use homm_ring_core::GridAxis;

    #[test]
    fn matches_serial_trace() {
        let mode = TraceMode::Unbalanced {
            theta: GridAxis::new(0.0, std::f64::consts::TAU, 100).unwrap(),
            tau: GridAxis::new(0.3, 0.9, 7).unwrap(),
            eta: GridAxis::new(0.3, 0.9, 5).unwrap(),
        };
        let tol = TraceTolerances::default();
        let serial = homm_ring_core::trace_manifold(&mode, &tol).unwrap();
        let parallel = with_pool(3, || trace_manifold(&mode, &tol)).unwrap().unwrap();
        assert_eq!(serial, parallel);
    }
}
