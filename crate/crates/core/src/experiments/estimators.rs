//! Monte Carlo estimators for k-facet counts and estranged facet pairs.

use serde::{Deserialize, Serialize};

use super::mc::{mc_run, mc_run_multi, MCEstimate};
use crate::error::{Error, Result};
use crate::geometry::{estranged_pair_count, facet_set, is_facet, kfacet_profile, leading_subset_side_counts};
use crate::sampling::{gaussian_point_set, PointSet};

/// Enumeration limits. Every estimator checks these before sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest C(n, d) enumerated per trial.
    pub max_subsets: u64,
    pub max_estranged_d: usize,
    pub max_pair_d: usize,
    pub max_blaschke_d: usize,
    pub max_truncated_d: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_subsets: 200_000, max_estranged_d: 7, max_pair_d: 10, max_blaschke_d: 6, max_truncated_d: 8 }
    }
}

impl Caps {
    pub fn check_subsets(&self, n: usize, d: usize) -> Result<u64> {
        crate::geometry::subset_count_within(n, d, self.max_subsets)
    }

    pub(crate) fn check_dimension(&self, what: &str, d: usize, max: usize) -> Result<()> {
        if d > max {
            return Err(Error::ResourceCap(format!("{what} is limited to d <= {max}, got d = {d}")));
        }
        Ok(())
    }
}

/// Shared run settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub caps: Caps,
}

impl RunConfig {
    pub fn new(trials: u64, seed: u64, workers: usize) -> Self {
        RunConfig { trials, seed, workers, caps: Caps::default() }
    }
}

fn check_kfacet_args(n: usize, d: usize, k: usize) -> Result<()> {
    if d == 0 || n < d + 1 {
        return Err(Error::InvalidParameter(format!("need d >= 1 and n >= d + 1, got n = {n}, d = {d}")));
    }
    if k > n - d {
        return Err(Error::InvalidParameter(format!("need k <= n - d = {}, got k = {k}", n - d)));
    }
    Ok(())
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// E e_k by full enumeration of each sampled point set.
pub fn kfacet_expectation_mc(n: usize, d: usize, k: usize, cfg: &RunConfig) -> Result<MCEstimate> {
    check_kfacet_args(n, d, k)?;
    cfg.caps.check_subsets(n, d)?;
    mc_run(
        |s| {
            let ps = gaussian_point_set(s, n, d)?;
            Ok(kfacet_profile(&ps)?.e[k] as f64)
        },
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

/// E e_k for every k at once, from the same samples.
pub fn kfacet_profile_mc(n: usize, d: usize, cfg: &RunConfig) -> Result<Vec<MCEstimate>> {
    check_kfacet_args(n, d, 0)?;
    cfg.caps.check_subsets(n, d)?;
    mc_run_multi(
        |s, out| {
            let ps = gaussian_point_set(s, n, d)?;
            for (o, e) in out.iter_mut().zip(kfacet_profile(&ps)?.e) {
                *o = e as f64;
            }
            Ok(())
        },
        n - d + 1,
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

/// Probability that the first d of n Gaussian points span a k-facet.
pub fn fixed_subset_kfacet_probability_mc(n: usize, d: usize, k: usize, cfg: &RunConfig) -> Result<MCEstimate> {
    check_kfacet_args(n, d, k)?;
    mc_run(
        |s| {
            let ps = gaussian_point_set(s, n, d)?;
            let side = leading_subset_side_counts(&ps)?;
            Ok(indicator(side.above == k || side.below == k))
        },
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

/// The one-dimensional reduction: `Y ~ N(0, 1/d)` against n − d standard
/// normals, success when the count above Y is k or n − d − k.
pub fn reduced_kfacet_probability_mc(n: usize, d: usize, k: usize, cfg: &RunConfig) -> Result<MCEstimate> {
    check_kfacet_args(n, d, k)?;
    let m = n - d;
    let scale = 1.0 / (d as f64).sqrt();
    mc_run(
        |s| {
            let y = scale * s.standard_normal();
            let above = (0..m).filter(|_| s.standard_normal() > y).count();
            Ok(indicator(above == k || above == m - k))
        },
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

/// Expected number of unordered estranged facet pairs of 2d Gaussian points.
pub fn estranged_expectation_mc(d: usize, cfg: &RunConfig) -> Result<MCEstimate> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    cfg.caps.check_dimension("estranged pair enumeration", d, cfg.caps.max_estranged_d)?;
    cfg.caps.check_subsets(2 * d, d)?;
    mc_run(
        |s| {
            let ps = gaussian_point_set(s, 2 * d, d)?;
            Ok(estranged_pair_count(&facet_set(&ps)?) as f64)
        },
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

fn split_halves_are_facets(ps: &PointSet) -> Result<bool> {
    let d = ps.d();
    let first: Vec<usize> = (0..d).collect();
    let second: Vec<usize> = (d..2 * d).collect();
    Ok(is_facet(ps, &first)? && is_facet(ps, &second)?)
}

/// Probability that the first d and the last d of 2d Gaussian points are
/// both facets.
pub fn pair_facet_probability_mc(d: usize, cfg: &RunConfig) -> Result<MCEstimate> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    cfg.caps.check_dimension("pair facet probability", d, cfg.caps.max_pair_d)?;
    mc_run(
        |s| Ok(indicator(split_halves_are_facets(&gaussian_point_set(s, 2 * d, d)?)?)),
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}
