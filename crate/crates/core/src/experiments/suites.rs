//! Named groups of checks run by `gpoly verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::estimators::{Caps, RunConfig};
use super::verify::{
    verify_blaschke, verify_dot_density, verify_kfacet_triangulation, verify_logconcave_moment, verify_lp_limit,
    verify_simplex_volume, verify_truncated_bound, BlaschkeDistribution, LogconcaveFamily, VerificationReport,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Blaschke,
    Simplex,
    Truncated,
    Logconcave,
    Dotdensity,
    Lp,
    Thm32,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Blaschke,
        Suite::Simplex,
        Suite::Truncated,
        Suite::Logconcave,
        Suite::Dotdensity,
        Suite::Lp,
        Suite::Thm32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Blaschke => "blaschke",
            Suite::Simplex => "simplex",
            Suite::Truncated => "truncated",
            Suite::Logconcave => "logconcave",
            Suite::Dotdensity => "dotdensity",
            Suite::Lp => "lp",
            Suite::Thm32 => "thm32",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Trial counts used by the suites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteBudget {
    pub blaschke: u64,
    pub simplex: u64,
    pub truncated: u64,
    pub logconcave: u64,
    pub dotdensity: u64,
    pub thm32_full: u64,
    pub thm32_reduced: u64,
}

impl Default for SuiteBudget {
    fn default() -> Self {
        SuiteBudget {
            blaschke: 100_000,
            simplex: 100_000,
            truncated: 20_000,
            logconcave: 100_000,
            dotdensity: 100_000,
            thm32_full: 100_000,
            thm32_reduced: 1_000_000,
        }
    }
}

pub const TRIANGULATION_CASES: [(usize, usize, usize); 4] = [(2, 5, 0), (2, 5, 1), (3, 6, 0), (4, 8, 2)];
pub const TRUNCATION_LEVELS: [f64; 3] = [0.0, 0.5, 2.0];
pub const LP_EXPONENTS: [f64; 3] = [10.0, 100.0, 1000.0];
pub const DOT_DENSITY_DIMENSIONS: [usize; 3] = [3, 8, 20];

/// Seed for the `tag`-th check of a suite run (SplitMix64 finaliser), so
/// checks do not share random streams.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Runner {
    seed: u64,
    workers: usize,
    caps: Caps,
    tag: u64,
}

impl Runner {
    fn next(&mut self, trials: u64) -> RunConfig {
        self.tag += 1;
        RunConfig { trials, seed: sub_seed(self.seed, self.tag), workers: self.workers, caps: self.caps }
    }
}

fn run_one(suite: Suite, r: &mut Runner, budget: &SuiteBudget, out: &mut Vec<VerificationReport>) -> Result<()> {
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                run_one(s, r, budget, out)?;
            }
        }
        Suite::Blaschke => {
            for d in 1..=5 {
                out.push(verify_blaschke(d, BlaschkeDistribution::Gaussian, &r.next(budget.blaschke))?);
            }
            for d in 1..=3 {
                out.push(verify_blaschke(d, BlaschkeDistribution::UniformCube, &r.next(budget.blaschke))?);
            }
        }
        Suite::Simplex => {
            for d in 1..=6 {
                out.push(verify_simplex_volume(d, &r.next(budget.simplex))?);
            }
        }
        Suite::Truncated => {
            for d in 3..=8 {
                for t in TRUNCATION_LEVELS {
                    out.push(verify_truncated_bound(d, t, &r.next(budget.truncated))?);
                }
            }
        }
        Suite::Logconcave => {
            for f in LogconcaveFamily::ALL {
                out.push(verify_logconcave_moment(f, &r.next(budget.logconcave))?);
            }
        }
        Suite::Dotdensity => {
            for d in DOT_DENSITY_DIMENSIONS {
                out.extend(verify_dot_density(d, &r.next(budget.dotdensity))?);
            }
        }
        Suite::Lp => out.push(verify_lp_limit(&LP_EXPONENTS)?),
        Suite::Thm32 => {
            for (d, n, k) in TRIANGULATION_CASES {
                let full = r.next(budget.thm32_full);
                let reduced = r.next(budget.thm32_reduced);
                out.push(verify_kfacet_triangulation(d, n, k, &full, &reduced)?);
            }
        }
    }
    Ok(())
}

/// Runs a suite. Check seeds are derived from `seed` and the check's
/// position, so a suite's output depends only on `seed` and the budget.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    workers: usize,
    budget: &SuiteBudget,
    caps: Caps,
) -> Result<Vec<VerificationReport>> {
    let mut runner = Runner { seed, workers, caps, tag: 0 };
    let mut out = Vec::new();
    run_one(suite, &mut runner, budget, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn sub_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| sub_seed(11, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(sub_seed(11, 1), sub_seed(12, 1));
    }

    #[test]
    fn small_budget_suite_is_reproducible() {
        let budget = SuiteBudget {
            blaschke: 2000,
            simplex: 2000,
            truncated: 500,
            logconcave: 2000,
            dotdensity: 2000,
            thm32_full: 2000,
            thm32_reduced: 5000,
        };
        let a = run_suite(Suite::All, 3, 1, &budget, Caps::default()).unwrap();
        let b = run_suite(Suite::All, 3, 8, &budget, Caps::default()).unwrap();
        assert_eq!(a.len(), 8 + 6 + 18 + 4 + 6 + 1 + 4);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
