//! Sample means with standard errors, and the ordered parallel map used by
//! every Monte Carlo estimator.

use std::sync::OnceLock;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Environment variable overriding the number of worker threads.
pub const WORKERS_ENV: &str = "DUNKL_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MeanEstimate {
    /// Welford accumulation in slice order, so the result is bit-stable for
    /// a given sample order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let delta = x - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (x - mean);
        }
        let n = xs.len();
        let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        MeanEstimate {
            mean,
            std_error: (var / n.max(1) as f64).sqrt(),
            n,
        }
    }

    /// Difference of two independent estimates.
    pub fn minus(&self, other: &MeanEstimate) -> MeanEstimate {
        MeanEstimate {
            mean: self.mean - other.mean,
            std_error: self.std_error.hypot(other.std_error),
            n: self.n.min(other.n),
        }
    }
}

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
            builder = builder.num_threads(n.max(1));
        }
        builder.build().expect("worker pool")
    })
}

/// Evaluates `f(i)` for `i in 0..n` in parallel and returns the results in
/// index order. The first error (by index) wins.
pub fn par_map_indexed<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    pool().install(|| (0..n).into_par_iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_error() {
        let e = MeanEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert!((e.mean - 2.5).abs() < 1e-15);
        // sample variance 5/3
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        let c = MeanEstimate::from_samples(&[0.7; 10]);
        assert!((c.mean - 0.7).abs() < 1e-15);
        assert!(c.std_error < 1e-15);
    }

    #[test]
    fn ordered_results() {
        let v = par_map_indexed(100, |i| Ok(i * 2)).unwrap();
        assert_eq!(v, (0..100).map(|i| i * 2).collect::<Vec<_>>());
        let e = par_map_indexed(10, |i| {
            if i >= 3 {
                Err(crate::Error::Config(format!("{i}")))
            } else {
                Ok(i)
            }
        });
        assert_eq!(e.unwrap_err(), crate::Error::Config("3".into()));
    }
}
