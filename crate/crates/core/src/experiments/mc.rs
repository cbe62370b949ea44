//! Deterministic parallel Monte Carlo.
//!
//! Trials are grouped into fixed blocks of consecutive indices. Each block is
//! accumulated serially, and block summaries are merged pairwise in index
//! order, so the floating-point result does not depend on how blocks were
//! scheduled across threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{stream, RngStream};

pub const BLOCK_TRIALS: u64 = 4096;
pub const CI95_Z: f64 = 1.96;

/// Single-pass mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Welford) -> Welford {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Welford { count, mean: self.mean + delta * nb / n, m2: self.m2 + other.m2 + delta * delta * na * nb / n }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub variance: f64,
    pub trials: u64,
    pub std_error: f64,
    pub ci95: [f64; 2],
}

impl MCEstimate {
    pub fn from_welford(w: &Welford) -> Result<Self> {
        if w.count() < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 trials, got {}", w.count())));
        }
        let variance = w.variance();
        let std_error = (variance / w.count() as f64).sqrt();
        let mean = w.mean();
        Ok(MCEstimate {
            mean,
            variance,
            trials: w.count(),
            std_error,
            ci95: [mean - CI95_Z * std_error, mean + CI95_Z * std_error],
        })
    }

    /// z-score of the estimate against an exact value. A zero standard error
    /// gives 0 on an exact match and ±∞ otherwise.
    pub fn z_against(&self, value: f64) -> f64 {
        z_score(self.mean - value, self.std_error)
    }

    /// z-score of the difference of two independent estimates.
    pub fn z_between(&self, other: &MCEstimate) -> f64 {
        z_score(self.mean - other.mean, self.std_error.hypot(other.std_error))
    }

    pub fn scaled(&self, factor: f64) -> MCEstimate {
        let f = factor.abs();
        MCEstimate {
            mean: self.mean * factor,
            variance: self.variance * factor * factor,
            trials: self.trials,
            std_error: self.std_error * f,
            ci95: [self.mean * factor - CI95_Z * self.std_error * f, self.mean * factor + CI95_Z * self.std_error * f],
        }
    }
}

pub(crate) fn z_score(diff: f64, se: f64) -> f64 {
    if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

fn check_run(trials: u64, workers: usize) -> Result<()> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 trials, got {trials}")));
    }
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    Ok(())
}

fn tree_merge(mut level: Vec<Vec<Welford>>) -> Vec<Welford> {
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().unwrap_or_default()
}

fn run_blocks<F>(trial: F, width: usize, trials: u64, master_seed: u64, workers: usize) -> Result<Vec<Welford>>
where
    F: Fn(&mut RngStream, &mut [f64]) -> Result<()> + Sync,
{
    check_run(trials, workers)?;
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let run_block = |b: u64| -> Result<Vec<Welford>> {
        let mut acc = vec![Welford::default(); width];
        let mut out = vec![0.0; width];
        let end = ((b + 1) * BLOCK_TRIALS).min(trials);
        for i in b * BLOCK_TRIALS..end {
            let mut s = stream(master_seed, i);
            trial(&mut s, &mut out).map_err(|e| Error::Trial { index: i, source: Box::new(e) })?;
            for (a, &x) in acc.iter_mut().zip(&out) {
                a.push(x);
            }
        }
        Ok(acc)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<Result<Vec<Welford>>> = pool.install(|| (0..blocks).into_par_iter().map(run_block).collect());
    let blocks: Vec<Vec<Welford>> = results.into_iter().collect::<Result<_>>()?;
    Ok(tree_merge(blocks))
}

/// Runs `trials` independent trials; trial `i` draws from `stream(master_seed, i)`.
///
/// If several trials fail, the error reports the lowest failing index.
pub fn mc_run<F>(trial: F, trials: u64, master_seed: u64, workers: usize) -> Result<MCEstimate>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let acc = run_blocks(
        |s, out| {
            out[0] = trial(s)?;
            Ok(())
        },
        1,
        trials,
        master_seed,
        workers,
    )?;
    MCEstimate::from_welford(&acc[0])
}

/// Vector-valued version of [`mc_run`]: the trial fills a slice of length `width`.
pub fn mc_run_multi<F>(trial: F, width: usize, trials: u64, master_seed: u64, workers: usize) -> Result<Vec<MCEstimate>>
where
    F: Fn(&mut RngStream, &mut [f64]) -> Result<()> + Sync,
{
    if width == 0 {
        return Err(Error::InvalidParameter("width must be at least 1".into()));
    }
    run_blocks(trial, width, trials, master_seed, workers)?.iter().map(MCEstimate::from_welford).collect()
}

/// Worker count from the host, at least 1.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
