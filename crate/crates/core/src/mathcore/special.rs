//! Gaussian special functions and log-gamma.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// (2π)^{-1/2}
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Φ(y), via `erfc` so the lower tail keeps full relative precision.
pub fn std_normal_cdf(y: f64) -> f64 {
    0.5 * libm::erfc(-y * FRAC_1_SQRT_2)
}

/// 1 - Φ(y), evaluated without cancellation.
pub fn std_normal_sf(y: f64) -> f64 {
    0.5 * libm::erfc(y * FRAC_1_SQRT_2)
}

pub fn std_normal_pdf(y: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * y * y).exp()
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma({x})")));
    }
    Ok(libm::lgamma_r(x).0)
}

/// ln C(n, k).
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k})")));
    }
    if k == 0 || k == n {
        return Ok(0.0);
    }
    let n = n as f64;
    let k = k as f64;
    Ok(log_gamma(n + 1.0)? - log_gamma(k + 1.0)? - log_gamma(n - k + 1.0)?)
}

/// Exact C(n, k) when it fits in a u64.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// ln √π, used by several closed forms.
pub fn ln_sqrt_pi() -> f64 {
    0.5 * PI.ln()
}
