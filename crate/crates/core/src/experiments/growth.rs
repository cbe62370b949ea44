//! Trend tables for (E e_k)^{1/d} against the theoretical growth base.

use std::io::Write;

use serde::Serialize;

use super::estimators::{kfacet_profile_mc, RunConfig};
use crate::error::{Error, Result};
use crate::theory::growth_base_kfacet;

/// Engineering band for root / base; the o(d) term has no known rate.
pub const GROWTH_BAND: (f64, f64) = (0.3, 3.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthTarget {
    /// e_0, the number of facets; base from r = 0.
    Facets,
    /// e_k with k = ⌊(n−d)/2⌋; base from r = 1/2.
    Middle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub mean: f64,
    pub se: f64,
    pub root: f64,
    pub base: f64,
}

impl GrowthRow {
    pub fn within_band(&self) -> bool {
        let ratio = self.root / self.base;
        (GROWTH_BAND.0..=GROWTH_BAND.1).contains(&ratio)
    }
}

/// One row per d with n = round(α d). Each d runs under its own seed offset.
pub fn facet_growth_table(alpha: f64, dims: &[usize], target: GrowthTarget, cfg: &RunConfig) -> Result<Vec<GrowthRow>> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be a finite number > 1, got {alpha}")));
    }
    let r = match target {
        GrowthTarget::Facets => 0.0,
        GrowthTarget::Middle => 0.5,
    };
    let base = growth_base_kfacet(alpha, r)?;
    dims.iter()
        .map(|&d| {
            let n = (alpha * d as f64).round() as usize;
            if d == 0 || n < d + 1 {
                return Err(Error::InvalidParameter(format!("alpha = {alpha}, d = {d} gives n = {n} < d + 1")));
            }
            let k = match target {
                GrowthTarget::Facets => 0,
                GrowthTarget::Middle => (n - d) / 2,
            };
            let run = RunConfig { seed: cfg.seed.wrapping_add(d as u64), ..*cfg };
            let est = kfacet_profile_mc(n, d, &run)?[k];
            Ok(GrowthRow { d, n, k, mean: est.mean, se: est.std_error, root: est.mean.powf(1.0 / d as f64), base })
        })
        .collect()
}

/// `d,n,mean,se,root,base` rows.
pub fn write_growth_csv<W: Write>(rows: &[GrowthRow], mut out: W) -> Result<()> {
    writeln!(out, "d,n,mean,se,root,base")?;
    for r in rows {
        writeln!(out, "{},{},{:.16e},{:.16e},{:.16e},{:.16e}", r.d, r.n, r.mean, r.se, r.root, r.base)?;
    }
    Ok(())
}
