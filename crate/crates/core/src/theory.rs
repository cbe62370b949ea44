//! Closed-form formulas and asymptotic constants, evaluated numerically.
//!
//! k-facet probabilities come from a one-dimensional quadrature against
//! `Y ~ N(0, 1/d)`; the growth constants and estranged-pair constants are
//! suprema found with the grid-plus-refinement optimisers in `mathcore`.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mathcore::optimize::{maximize_1d, maximize_box, MaximizeResult};
use crate::mathcore::quadrature::{integrate_1d, integrate_1d_with_breaks};
use crate::mathcore::special::{log_binomial, log_gamma, std_normal_cdf, std_normal_pdf, std_normal_sf};

/// Half-width of the integration window for `Y ~ N(0, 1/d)` formulas.
pub const KFACET_WINDOW: f64 = 12.0;
/// Upper end of the search box for the hyperplane distances.
pub const RHO_MAX: f64 = 6.0;
/// Distance of the search box from the singular ends w = ±1.
pub const W_CLIP: f64 = 1e-9;

const QUAD_TOL: f64 = 1e-12;
const PROFILE_NODES: usize = 2001;

/// Which side of a hyperplane a term refers to: `Minus` picks Φ, `Plus` picks 1 − Φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Minus, Sign::Plus];

    fn select(self, t: f64) -> f64 {
        match self {
            Sign::Minus => std_normal_cdf(t),
            Sign::Plus => std_normal_sf(t),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "-" | "minus" => Ok(Sign::Minus),
            "+" | "plus" => Ok(Sign::Plus),
            _ => Err(Error::Parse(format!("sign must be '-' or '+', got {s:?}"))),
        }
    }
}

/// Exponent convention for the k-facet growth constant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentVariant {
    /// Φ^{r(α−1)} (1−Φ)^{(1−r)(α−1)}.
    #[default]
    Proof,
    /// Φ^{rα} (1−Φ)^{α−1−rα}.
    Statement,
}

impl ExponentVariant {
    fn exponents(self, alpha: f64, r: f64) -> (f64, f64) {
        match self {
            ExponentVariant::Proof => (r * (alpha - 1.0), (1.0 - r) * (alpha - 1.0)),
            ExponentVariant::Statement => (r * alpha, alpha - 1.0 - r * alpha),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantContext {
    KFacet { alpha: f64, r: f64, variant: ExponentVariant },
    Estranged { s1: Sign, s2: Sign },
    EstrangedReduced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantResult {
    pub name: String,
    pub context: ConstantContext,
    pub value: f64,
    pub argmax: Vec<f64>,
    pub diagnostics: MaximizeResult,
}

impl ConstantResult {
    fn from_max(name: String, context: ConstantContext, m: MaximizeResult) -> Self {
        ConstantResult { name, context, value: m.value, argmax: m.argmax.clone(), diagnostics: m }
    }
}

fn check_probability(r: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must lie in [0, 1], got {r}")))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be a finite number > 1, got {alpha}")))
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(r: f64) -> Result<f64> {
    check_probability(r, "r")?;
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(r) + term(1.0 - r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KFacetFormulaInputs {
    pub n: usize,
    pub d: usize,
    pub k: usize,
}

impl KFacetFormulaInputs {
    pub fn new(n: usize, d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if n < d + 1 {
            return Err(Error::InvalidParameter(format!("need n >= d + 1, got n = {n}, d = {d}")));
        }
        if k > n - d {
            return Err(Error::InvalidParameter(format!("need k <= n - d = {}, got k = {k}", n - d)));
        }
        Ok(KFacetFormulaInputs { n, d, k })
    }

    fn others(&self) -> usize {
        self.n - self.d
    }

    /// 1 when the two sides hold the same number of points, else 2.
    pub fn multiplicity(&self) -> u32 {
        if 2 * self.k == self.others() {
            1
        } else {
            2
        }
    }
}

/// Natural log of the per-subset k-facet probability.
pub fn kfacet_log_probability_exact(input: KFacetFormulaInputs) -> Result<f64> {
    let KFacetFormulaInputs { d, k, .. } = input;
    let m = input.others();
    let (kf, jf, df) = (k as f64, (m - k) as f64, d as f64);
    let log_g = |y: f64| {
        let mut v = -df * y * y / 2.0;
        if k > 0 {
            v += kf * std_normal_cdf(y).ln();
        }
        if m > k {
            v += jf * std_normal_sf(y).ln();
        }
        v
    };

    let h = 2.0 * KFACET_WINDOW / (PROFILE_NODES - 1) as f64;
    let (mut peak_y, mut peak) = (0.0, f64::NEG_INFINITY);
    for i in 0..PROFILE_NODES {
        let y = -KFACET_WINDOW + i as f64 * h;
        let v = log_g(y);
        if v > peak {
            (peak_y, peak) = (y, v);
        }
    }
    let q = integrate_1d_with_breaks(|y| (log_g(y) - peak).exp(), -KFACET_WINDOW, KFACET_WINDOW, &[peak_y], QUAD_TOL)?;
    Ok(f64::from(input.multiplicity()).ln()
        + log_binomial(m as u64, k as u64)?
        + 0.5 * (df / (2.0 * PI)).ln()
        + peak
        + q.value.ln())
}

/// Probability that a fixed d-subset of n Gaussian points is a k-facet.
pub fn kfacet_probability_exact(input: KFacetFormulaInputs) -> Result<f64> {
    Ok(kfacet_log_probability_exact(input)?.exp().min(1.0))
}

/// Natural log of the expected number of k-facets.
pub fn kfacet_log_expectation_exact(input: KFacetFormulaInputs) -> Result<f64> {
    Ok(log_binomial(input.n as u64, input.d as u64)? + kfacet_log_probability_exact(input)?)
}

/// Expected number of k-facets, C(n, d) times the per-subset probability.
pub fn kfacet_expectation_exact(input: KFacetFormulaInputs) -> Result<f64> {
    Ok(kfacet_log_expectation_exact(input)?.exp())
}

/// The k-facet growth constant with the default (proof) exponents.
pub fn c_alpha_r(alpha: f64, r: f64) -> Result<ConstantResult> {
    c_alpha_r_with(alpha, r, ExponentVariant::Proof)
}

pub fn c_alpha_r_with(alpha: f64, r: f64, variant: ExponentVariant) -> Result<ConstantResult> {
    check_alpha(alpha)?;
    check_probability(r, "r")?;
    let (a, b) = variant.exponents(alpha, r);
    let m = maximize_1d(
        |y| std_normal_cdf(y).powf(a) * std_normal_sf(y).powf(b) * std_normal_pdf(y),
        -KFACET_WINDOW,
        KFACET_WINDOW,
    )?;
    Ok(ConstantResult::from_max("c_alpha_r".into(), ConstantContext::KFacet { alpha, r, variant }, m))
}

/// Base of the exponential growth in d of the expected number of k-facets
/// with n ≈ αd and k ≈ r(α−1)d.
pub fn growth_base_kfacet(alpha: f64, r: f64) -> Result<f64> {
    growth_base_kfacet_with(alpha, r, ExponentVariant::Proof)
}

pub fn growth_base_kfacet_with(alpha: f64, r: f64, variant: ExponentVariant) -> Result<f64> {
    let c = c_alpha_r_with(alpha, r, variant)?.value;
    let bits = alpha * binary_entropy(1.0 / alpha)? + (alpha - 1.0) * binary_entropy(r)?;
    Ok((bits * LN_2).exp() * (2.0 * PI).sqrt() * c)
}

fn check_w(w: f64) -> Result<f64> {
    if w.abs() < 1.0 {
        Ok((1.0 - w * w).sqrt())
    } else {
        Err(Error::Domain(format!("need |w| < 1, got {w}")))
    }
}

/// Signed distance from the origin, inside the first hyperplane, of its
/// intersection with the second.
pub fn signed_distance_t(rho1: f64, rho2: f64, w: f64) -> Result<f64> {
    let s = check_w(w)?;
    Ok((rho2 - rho1 * w) / s)
}

/// Integrand of the estranged-pair constant for one sign pattern.
pub fn estranged_integrand(rho1: f64, rho2: f64, w: f64, s1: Sign, s2: Sign) -> Result<f64> {
    let s = check_w(w)?;
    let t21 = (rho2 - rho1 * w) / s;
    let t12 = (rho1 - rho2 * w) / s;
    Ok((-(rho1 * rho1 + rho2 * rho2) / 2.0).exp() * s1.select(t21) * s2.select(t12) * s)
}

fn w_bounds() -> (f64, f64) {
    (-1.0 + W_CLIP, 1.0 - W_CLIP)
}

/// Supremum of the integrand over ρ₁, ρ₂ ∈ [0, 6] and w in the clipped interval.
pub fn estranged_constant(s1: Sign, s2: Sign) -> Result<ConstantResult> {
    let m = maximize_box(
        |x| estranged_integrand(x[0], x[1], x[2], s1, s2).unwrap_or(0.0),
        &[(0.0, RHO_MAX), (0.0, RHO_MAX), w_bounds()],
    )?;
    Ok(ConstantResult::from_max(format!("estranged_constant({s1},{s2})"), ConstantContext::Estranged { s1, s2 }, m))
}

/// The (−,−) integrand restricted to the diagonal ρ₁ = ρ₂ = ρ.
pub fn estranged_reduced_objective(rho: f64, w: f64) -> Result<f64> {
    let s = check_w(w)?;
    let phi = std_normal_cdf(rho * (1.0 - w) / s);
    Ok((-rho * rho).exp() * phi * phi * s)
}

/// Two-variable form of the (−,−) constant, searched over ρ ∈ [0, 6].
pub fn estranged_constant_reduced() -> Result<ConstantResult> {
    let m = maximize_box(|x| estranged_reduced_objective(x[0], x[1]).unwrap_or(0.0), &[(0.0, RHO_MAX), w_bounds()])?;
    Ok(ConstantResult::from_max("estranged_constant_reduced".into(), ConstantContext::EstrangedReduced, m))
}

fn check_dimension(d: usize, min: usize) -> Result<()> {
    if d >= min {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension must be at least {min}, got {d}")))
    }
}

fn log_dot_density_coefficient(d: usize) -> Result<f64> {
    let df = d as f64;
    Ok(log_gamma(df / 2.0)? - 0.5 * PI.ln() - log_gamma((df - 1.0) / 2.0)?)
}

/// Density of ⟨θ₁, θ₂⟩ for independent uniform unit vectors in R^d.
pub fn dot_density(w: f64, d: usize) -> Result<f64> {
    check_dimension(d, 2)?;
    if !(w.abs() <= 1.0) {
        return Err(Error::Domain(format!("need |w| <= 1, got {w}")));
    }
    if d == 2 && w.abs() == 1.0 {
        return Err(Error::Domain("density is infinite at w = ±1 for d = 2".into()));
    }
    let c = log_dot_density_coefficient(d)?.exp();
    if d == 3 {
        return Ok(c);
    }
    Ok(c * (1.0 - w * w).powf((d as f64 - 3.0) / 2.0))
}

/// ∫ w^power · dot_density(w, d) dw, integrated in the angle w = sin u so
/// the endpoint singularity at d = 2 disappears.
pub fn dot_density_moment(d: usize, power: u32) -> Result<f64> {
    check_dimension(d, 2)?;
    if power % 2 == 1 {
        return Ok(0.0);
    }
    let c = log_dot_density_coefficient(d)?.exp();
    let q = integrate_1d(
        |u| {
            let (s, co) = u.sin_cos();
            s.powi(power as i32) * co.max(0.0).powi(d as i32 - 2)
        },
        0.0,
        FRAC_PI_2,
        QUAD_TOL,
    )?;
    Ok(2.0 * c * q.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimplexVolumeFormula {
    pub d: usize,
    pub value: f64,
    pub log_value: f64,
    /// π^{−1/2} (e/d)^{d/2}.
    pub asymptotic: f64,
}

/// Expected volume of the simplex spanned by d+1 standard Gaussian points in R^d.
pub fn gaussian_simplex_expected_volume(d: usize) -> Result<SimplexVolumeFormula> {
    check_dimension(d, 1)?;
    let df = d as f64;
    let log_value = 0.5 * (df + 1.0).ln() - df / 2.0 * LN_2 - log_gamma(df / 2.0 + 1.0)?;
    let log_asym = -0.5 * PI.ln() + df / 2.0 * (1.0 - df.ln());
    Ok(SimplexVolumeFormula { d, value: log_value.exp(), log_value, asymptotic: log_asym.exp() })
}

/// Natural log of the lower bound on the expected volume of the simplex of d
/// halfspace-truncated Gaussian points in R^{d−1}.
pub fn truncated_simplex_log_lower_bound(d: usize) -> Result<f64> {
    check_dimension(d, 2)?;
    let df = d as f64;
    Ok(0.5 * (1.0 - 2.0 / PI).ln() + 0.5 * df.ln() - (df + 5.0) / 2.0 * LN_2 - log_gamma((df + 1.0) / 2.0)?)
}

pub fn truncated_simplex_lower_bound(d: usize) -> Result<f64> {
    Ok(truncated_simplex_log_lower_bound(d)?.exp())
}

/// (∫ φ^p)^{1/p} for the standard normal density, p ≥ 1.
///
/// Computed as φ(0) · (∫ e^{−p y²/2})^{1/p} so large p does not underflow.
pub fn gaussian_pdf_lp_norm(p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("need finite p >= 1, got {p}")));
    }
    let half = 40.0 / p.sqrt();
    let q = integrate_1d_with_breaks(|y| (-p * y * y / 2.0).exp(), -half, half, &[0.0], QUAD_TOL)?;
    Ok(std_normal_pdf(0.0) * q.value.powf(1.0 / p))
}
