//! A rayon-backed [`Executor`].

use alphakit_core::{Complex64, Executor};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Caps the worker count; `0` or unset means one thread per core.
pub const THREADS_ENV: &str = "ALPHAKIT_THREADS";

/// Evaluates points on a dedicated thread pool. Results come back in input
/// order, so reductions over them do not depend on scheduling.
#[derive(Debug)]
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn with_threads(threads: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
        Ok(Parallel { pool })
    }

    /// Reads [`THREADS_ENV`].
    pub fn from_env() -> Result<Self> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Invalid(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
            _ => 0,
        };
        Parallel::with_threads(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Parallel {
    fn map_points<T, F>(&self, points: &[Complex64], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Complex64) -> T + Sync + Send,
    {
        self.pool.install(|| points.par_iter().map(|&z| f(z)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alphakit_core::Sequential;

    #[test]
    fn matches_sequential_order() {
        let pts: Vec<Complex64> = (0..1000).map(|i| Complex64::new(i as f64 * 1e-3, 0.0)).collect();
        let f = |z: Complex64| (z * z).re.sin();
        let par = Parallel::with_threads(4).unwrap().map_points(&pts, f);
        let seq = Sequential.map_points(&pts, f);
        assert_eq!(par, seq);
    }
}
