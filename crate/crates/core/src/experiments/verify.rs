//! Checks that compare simulation against closed forms.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::estimators::{fixed_subset_kfacet_probability_mc, reduced_kfacet_probability_mc, RunConfig};
use super::mc::{mc_run, mc_run_multi, MCEstimate};
use crate::error::{Error, Result};
use crate::mathcore::linalg::{dot, simplex_volume};
use crate::mathcore::special::{std_normal_cdf, std_normal_pdf};
use crate::sampling::{gaussian_point_set, halfspace_truncated_gaussians, unit_direction, PointSet};
use crate::theory::{
    dot_density_moment, gaussian_pdf_lp_norm, gaussian_simplex_expected_volume, kfacet_probability_exact,
    truncated_simplex_lower_bound, KFacetFormulaInputs,
};

pub const Z_THRESHOLD: f64 = 3.0;
pub const LOGCONCAVE_RATIO_BOUND: f64 = 0.125;
pub const LP_LIMIT_TOLERANCE: f64 = 0.01;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: Value,
    pub theory: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<MCEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub criterion: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl VerificationReport {
    fn z_check(name: &str, params: Value, theory: f64, estimate: MCEstimate) -> Self {
        let z = estimate.z_against(theory);
        VerificationReport {
            name: name.into(),
            params,
            theory,
            estimate: Some(estimate),
            z: Some(z),
            criterion: format!("|z| <= {Z_THRESHOLD}"),
            passed: z.abs() <= Z_THRESHOLD,
            details: Value::Null,
        }
    }

    /// Relative deviation of the estimate from theory, when both exist.
    pub fn relative_error(&self) -> Option<f64> {
        self.estimate.map(|e| (e.mean - self.theory).abs() / self.theory.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlaschkeDistribution {
    Gaussian,
    UniformCube,
}

impl BlaschkeDistribution {
    /// det Cov of one coordinate vector.
    fn covariance_determinant(self, d: usize) -> f64 {
        match self {
            BlaschkeDistribution::Gaussian => 1.0,
            BlaschkeDistribution::UniformCube => (1.0f64 / 12.0).powi(d as i32),
        }
    }

    fn sample(self, s: &mut crate::sampling::RngStream, n: usize, d: usize) -> Result<PointSet> {
        match self {
            BlaschkeDistribution::Gaussian => gaussian_point_set(s, n, d),
            BlaschkeDistribution::UniformCube => {
                let coords = (0..n * d).map(|_| s.uniform()).collect();
                PointSet::new(n, d, coords, crate::sampling::Provenance::External)
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            BlaschkeDistribution::Gaussian => "gaussian",
            BlaschkeDistribution::UniformCube => "uniform-cube",
        }
    }
}

fn simplex_of(ps: &PointSet) -> Result<f64> {
    let pts: Vec<&[f64]> = ps.points().collect();
    simplex_volume(&pts)
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|i| i as f64).product()
}

/// E[vol²] of a random simplex against (d+1)/d! · det Cov.
pub fn verify_blaschke(d: usize, dist: BlaschkeDistribution, cfg: &RunConfig) -> Result<VerificationReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    cfg.caps.check_dimension("Blaschke check", d, cfg.caps.max_blaschke_d)?;
    let theory = (d + 1) as f64 / factorial(d) * dist.covariance_determinant(d);
    let est = mc_run(|s| Ok(simplex_of(&dist.sample(s, d + 1, d)?)?.powi(2)), cfg.trials, cfg.seed, cfg.workers)?;
    Ok(VerificationReport::z_check(
        "blaschke",
        json!({"d": d, "distribution": dist.name(), "trials": cfg.trials, "seed": cfg.seed}),
        theory,
        est,
    ))
}

/// Mean volume of d+1 Gaussian points against the closed form.
pub fn verify_simplex_volume(d: usize, cfg: &RunConfig) -> Result<VerificationReport> {
    let theory = gaussian_simplex_expected_volume(d)?.value;
    let est = mc_run(|s| simplex_of(&gaussian_point_set(s, d + 1, d)?), cfg.trials, cfg.seed, cfg.workers)?;
    Ok(VerificationReport::z_check(
        "simplex_volume",
        json!({"d": d, "trials": cfg.trials, "seed": cfg.seed}),
        theory,
        est,
    ))
}

/// Mean volume of d halfspace-truncated Gaussian points in R^{d−1}: passes
/// when mean + 3 SE reaches the lower bound.
pub fn verify_truncated_bound(d: usize, t: f64, cfg: &RunConfig) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    cfg.caps.check_dimension("truncated bound check", d, cfg.caps.max_truncated_d)?;
    let bound = truncated_simplex_lower_bound(d)?;
    let est =
        mc_run(|s| simplex_of(&halfspace_truncated_gaussians(s, d - 1, t, d)?), cfg.trials, cfg.seed, cfg.workers)?;
    let margin = est.mean + Z_THRESHOLD * est.std_error;
    Ok(VerificationReport {
        name: "truncated_bound".into(),
        params: json!({"d": d, "t": t, "trials": cfg.trials, "seed": cfg.seed}),
        theory: bound,
        z: Some(est.z_against(bound)),
        estimate: Some(est),
        criterion: format!("mean + {Z_THRESHOLD} se >= bound"),
        passed: margin >= bound,
        details: Value::Null,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogconcaveFamily {
    Uniform,
    Gaussian,
    TruncatedGaussian,
    Laplace,
}

impl LogconcaveFamily {
    pub const ALL: [LogconcaveFamily; 4] = [
        LogconcaveFamily::Uniform,
        LogconcaveFamily::Gaussian,
        LogconcaveFamily::TruncatedGaussian,
        LogconcaveFamily::Laplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogconcaveFamily::Uniform => "uniform",
            LogconcaveFamily::Gaussian => "gaussian",
            LogconcaveFamily::TruncatedGaussian => "truncated-gaussian",
            LogconcaveFamily::Laplace => "laplace",
        }
    }

    fn mean(self) -> f64 {
        match self {
            LogconcaveFamily::TruncatedGaussian => (2.0 / PI).sqrt(),
            _ => 0.0,
        }
    }

    /// Raw draw before centering: uniform on [−1, 1], N(0, 1), N(0, 1)
    /// truncated to [0, ∞), and the unit Laplace law.
    fn draw(self, s: &mut crate::sampling::RngStream) -> f64 {
        match self {
            LogconcaveFamily::Uniform => 2.0 * s.uniform() - 1.0,
            LogconcaveFamily::Gaussian => s.standard_normal(),
            LogconcaveFamily::TruncatedGaussian => s.standard_normal().abs(),
            LogconcaveFamily::Laplace => {
                let e = -(1.0 - s.uniform()).ln();
                if s.uniform() < 0.5 {
                    -e
                } else {
                    e
                }
            }
        }
    }

    /// E|X − EX| / √Var X.
    pub fn theory_ratio(self) -> f64 {
        match self {
            LogconcaveFamily::Uniform => 3f64.sqrt() / 2.0,
            LogconcaveFamily::Gaussian => (2.0 / PI).sqrt(),
            LogconcaveFamily::Laplace => FRAC_1_SQRT_2,
            LogconcaveFamily::TruncatedGaussian => {
                let mu = self.mean();
                let mad = 4.0 * (std_normal_pdf(mu) - mu * (1.0 - std_normal_cdf(mu)));
                mad / (1.0 - 2.0 / PI).sqrt()
            }
        }
    }
}

impl FromStr for LogconcaveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LogconcaveFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for LogconcaveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Empirical E|X| / √(E X²) of a centred family against the 1/8 floor, with
/// a delta-method standard error.
pub fn verify_logconcave_moment(family: LogconcaveFamily, cfg: &RunConfig) -> Result<VerificationReport> {
    let mu = family.mean();
    let est = mc_run_multi(
        |s, out| {
            let x = family.draw(s) - mu;
            let a = x.abs();
            out[0] = a;
            out[1] = x * x;
            out[2] = a * x * x;
            Ok(())
        },
        3,
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )?;
    let (a, b) = (est[0].mean, est[1].mean);
    let cov = est[2].mean - a * b;
    let ratio = a / b.sqrt();
    let n = cfg.trials as f64;
    let var = (est[0].variance - (a / b) * cov + (a / (2.0 * b)).powi(2) * est[1].variance) / b;
    let se = (var.max(0.0) / n).sqrt();
    let ratio_est = MCEstimate {
        mean: ratio,
        variance: var.max(0.0),
        trials: cfg.trials,
        std_error: se,
        ci95: [ratio - 1.96 * se, ratio + 1.96 * se],
    };
    let theory = family.theory_ratio();
    Ok(VerificationReport {
        name: "logconcave_moment".into(),
        params: json!({"family": family.name(), "trials": cfg.trials, "seed": cfg.seed}),
        theory,
        estimate: Some(ratio_est),
        z: Some(ratio_est.z_against(theory)),
        criterion: format!("ratio - {Z_THRESHOLD} se >= {LOGCONCAVE_RATIO_BOUND}"),
        passed: ratio - Z_THRESHOLD * se >= LOGCONCAVE_RATIO_BOUND,
        details: json!({"bound": LOGCONCAVE_RATIO_BOUND}),
    })
}

/// E W² and E W⁴ of the inner product of two random directions against the
/// density's moments; one report per moment.
pub fn verify_dot_density(d: usize, cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    let est = mc_run_multi(
        |s, out| {
            let w = dot(&unit_direction(s, d)?, &unit_direction(s, d)?);
            out[0] = w * w;
            out[1] = out[0] * out[0];
            Ok(())
        },
        2,
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )?;
    [2u32, 4]
        .iter()
        .zip(est)
        .map(|(&p, e)| {
            let theory = dot_density_moment(d, p)?;
            Ok(VerificationReport::z_check(
                &format!("dot_density_moment_{p}"),
                json!({"d": d, "power": p, "trials": cfg.trials, "seed": cfg.seed}),
                theory,
                e,
            ))
        })
        .collect()
}

/// (∫φ^p)^{1/p} for increasing p against ‖φ‖∞.
pub fn verify_lp_limit(p_values: &[f64]) -> Result<VerificationReport> {
    if p_values.is_empty() {
        return Err(Error::InvalidParameter("need at least one p".into()));
    }
    let limit = std_normal_pdf(0.0);
    let values = p_values.iter().map(|&p| gaussian_pdf_lp_norm(p)).collect::<Result<Vec<f64>>>()?;
    let increasing = values.windows(2).all(|w| w[0] < w[1]) && p_values.windows(2).all(|w| w[0] < w[1]);
    let last = *values.last().unwrap_or(&0.0);
    let below = values.iter().all(|&v| v <= limit);
    let passed = increasing && below && (limit - last).abs() <= LP_LIMIT_TOLERANCE;
    let table: Vec<Value> = p_values.iter().zip(&values).map(|(p, v)| json!({"p": p, "value": v})).collect();
    Ok(VerificationReport {
        name: "lp_limit".into(),
        params: json!({"p": p_values}),
        theory: limit,
        estimate: None,
        z: None,
        criterion: format!("increasing and last within {LP_LIMIT_TOLERANCE} of the sup norm"),
        passed,
        details: json!({"values": table, "increasing": increasing}),
    })
}

/// Exact probability, full-dimensional MC and reduced MC for one (d, n, k):
/// all three pairwise z-scores must be within threshold.
pub fn verify_kfacet_triangulation(
    d: usize,
    n: usize,
    k: usize,
    full: &RunConfig,
    reduced: &RunConfig,
) -> Result<VerificationReport> {
    let exact = kfacet_probability_exact(KFacetFormulaInputs::new(n, d, k)?)?;
    let a = fixed_subset_kfacet_probability_mc(n, d, k, full)?;
    let b = reduced_kfacet_probability_mc(n, d, k, reduced)?;
    let z_full = a.z_against(exact);
    let z_reduced = b.z_against(exact);
    let z_pair = a.z_between(&b);
    let worst = z_full.abs().max(z_reduced.abs()).max(z_pair.abs());
    Ok(VerificationReport {
        name: "kfacet_triangulation".into(),
        params: json!({"d": d, "n": n, "k": k, "full_trials": full.trials, "reduced_trials": reduced.trials,
                       "seed": full.seed, "reduced_seed": reduced.seed}),
        theory: exact,
        estimate: Some(a),
        z: Some(z_full),
        criterion: format!("all pairwise |z| <= {Z_THRESHOLD}"),
        passed: worst <= Z_THRESHOLD,
        details: json!({"reduced": b, "z_full_exact": z_full, "z_reduced_exact": z_reduced, "z_full_reduced": z_pair}),
    })
}
