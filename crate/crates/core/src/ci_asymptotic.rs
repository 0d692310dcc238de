//! Normal-approximation intervals built on the unbiased moment estimator.

use serde::{Deserialize, Serialize};

use crate::ci_exact::{ConfidenceLevel, IntervalEstimate, Method};
use crate::error::{domain, Result};
use crate::model::{ModelConfig, ObservedCount};
use crate::numkernel::{normal_quantile, Probability};

/// Unclipped moment estimate of `pi` and its unbiased variance estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnbiasedEstimate {
    pub pi_c: f64,
    pub variance_unbiased: f64,
}

/// `(rho_hat - (1 - q)) / (2q - 1)` without clipping.
pub fn moment_estimate(config: &ModelConfig, z: ObservedCount) -> f64 {
    let q = config.q().get();
    let rho_hat = z.get() as f64 / config.n() as f64;
    (rho_hat - (1.0 - q)) / (2.0 * q - 1.0)
}

/// Moment estimate plus `rho_hat (1 - rho_hat) / ((n - 1)(2q - 1)^2)`. Needs `n >= 2`.
pub fn unbiased_estimate(config: &ModelConfig, z: ObservedCount) -> Result<UnbiasedEstimate> {
    let n = config.n();
    if n < 2 {
        return Err(domain("the unbiased variance estimate needs n >= 2"));
    }
    let q = config.q().get();
    let rho_hat = z.get() as f64 / n as f64;
    let slope = 2.0 * q - 1.0;
    Ok(UnbiasedEstimate {
        pi_c: moment_estimate(config, z),
        variance_unbiased: rho_hat * (1.0 - rho_hat) / ((n - 1) as f64 * slope * slope),
    })
}

fn two_sided_quantile(level: &ConfidenceLevel) -> Result<f64> {
    normal_quantile(Probability::new(level.upper_tail())?)
}

/// Roots of the quadratic `(pi_c - pi)^2 = u^2 Var(pi_c)` with the exact
/// variance `pi(1-pi)/n + q(1-q)/(n(2q-1)^2)`.
pub fn wp_interval(
    config: &ModelConfig,
    z: ObservedCount,
    level: &ConfidenceLevel,
) -> Result<IntervalEstimate> {
    let u = two_sided_quantile(level)?;
    let n = config.n() as f64;
    let q = config.q().get();
    let pc = moment_estimate(config, z);
    let u2 = u * u;
    let one_minus_2q = 1.0 - 2.0 * q;

    let disc =
        4.0 * n * pc * (1.0 - pc) + (4.0 * n * (1.0 - q) * q + u2) / (one_minus_2q * one_minus_2q);
    let denom = 2.0 * (n + u2);
    let center = (2.0 * n * pc + u2) / denom;
    if disc < 0.0 {
        let mut ci = IntervalEstimate::from_raw(Method::Wp, center, center);
        ci.collapsed = true;
        return Ok(ci);
    }
    let half = u * disc.sqrt() / denom;
    Ok(IntervalEstimate::from_raw(
        Method::Wp,
        center - half,
        center + half,
    ))
}

/// `pi_c ± u sqrt(unbiased variance)`. Needs `n >= 2`.
pub fn ap_interval(
    config: &ModelConfig,
    z: ObservedCount,
    level: &ConfidenceLevel,
) -> Result<IntervalEstimate> {
    let est = unbiased_estimate(config, z)?;
    let u = two_sided_quantile(level)?;
    let half = u * est.variance_unbiased.sqrt();
    Ok(IntervalEstimate::from_raw(
        Method::Ap,
        est.pi_c - half,
        est.pi_c + half,
    ))
}

/// Unclipped WP roots, for residual checks.
#[doc(hidden)]
pub fn wp_raw_roots(
    config: &ModelConfig,
    z: ObservedCount,
    level: &ConfidenceLevel,
) -> Result<(f64, f64)> {
    let u = two_sided_quantile(level)?;
    let n = config.n() as f64;
    let q = config.q().get();
    let pc = moment_estimate(config, z);
    let u2 = u * u;
    let s = 1.0 - 2.0 * q;
    let disc = (4.0 * n * pc * (1.0 - pc) + (4.0 * n * (1.0 - q) * q + u2) / (s * s)).max(0.0);
    let denom = 2.0 * (n + u2);
    let center = (2.0 * n * pc + u2) / denom;
    let half = u * disc.sqrt() / denom;
    Ok((center - half, center + half))
}
