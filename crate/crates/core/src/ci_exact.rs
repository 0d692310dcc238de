//! Exact equitailed confidence interval for `pi`.
//!
//! The Clopper–Pearson interval for `rho` at the observed count is mapped to
//! the `pi` scale through `pi = (rho - (1 - q)) / (2q - 1)`. Since `2q - 1 < 0`
//! the upper `rho` bound becomes the lower `pi` bound and vice versa.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::model::{ModelConfig, ObservedCount};
use crate::numkernel::{inv_reg_inc_beta_seeded, Probability};

/// Interval construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// exact equitailed interval
    Cp,
    /// asymptotic interval from the quadratic in `pi`
    Wp,
    /// asymptotic interval with plug-in unbiased variance
    Ap,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Cp => "cp",
            Method::Wp => "wp",
            Method::Ap => "ap",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cp" => Ok(Method::Cp),
            "wp" => Ok(Method::Wp),
            "ap" => Ok(Method::Ap),
            other => Err(domain(format!(
                "unknown method '{other}' (expected cp, wp or ap)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Confidence level `delta`, `0 < delta < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceLevel(Probability);

impl ConfidenceLevel {
    pub fn new(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta < 1.0 {
            Ok(ConfidenceLevel(Probability::new(delta)?))
        } else {
            Err(domain(format!(
                "confidence level must satisfy 0 < delta < 1, got {delta}"
            )))
        }
    }

    #[inline]
    pub fn get(&self) -> f64 {
        self.0.get()
    }

    /// `(1 - delta) / 2`
    pub fn lower_tail(&self) -> f64 {
        (1.0 - self.get()) / 2.0
    }

    /// `(1 + delta) / 2`
    pub fn upper_tail(&self) -> f64 {
        (1.0 + self.get()) / 2.0
    }
}

/// A reported interval for `pi`, clipped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub method: Method,
    pub lower: f64,
    pub upper: f64,
    /// the unclipped lower endpoint was below 0
    pub lower_degenerate: bool,
    /// the unclipped upper endpoint was above 1
    pub upper_degenerate: bool,
    /// the interval collapsed to a single point (negative discriminant)
    pub collapsed: bool,
}

impl IntervalEstimate {
    /// Clips raw endpoints to `[0, 1]` and records which side was clipped.
    pub(crate) fn from_raw(method: Method, raw_lower: f64, raw_upper: f64) -> Self {
        IntervalEstimate {
            method,
            lower: raw_lower.clamp(0.0, 1.0),
            upper: raw_upper.clamp(0.0, 1.0),
            lower_degenerate: raw_lower < 0.0,
            upper_degenerate: raw_upper > 1.0,
            collapsed: false,
        }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// Strict containment `lower < pi < upper`.
    #[inline]
    pub fn covers(&self, pi: f64) -> bool {
        self.lower < pi && pi < self.upper
    }
}

/// Clopper–Pearson bounds `(rho_lower, rho_upper)` for count `z` out of `n`.
fn rho_bounds(
    n: u64,
    z: u64,
    level: &ConfidenceLevel,
    seeds: (Option<f64>, Option<f64>),
) -> Result<(f64, f64)> {
    let lower = if z == 0 {
        0.0
    } else {
        inv_reg_inc_beta_seeded(z as f64, (n - z + 1) as f64, level.lower_tail(), seeds.0)?
    };
    let upper = if z == n {
        1.0
    } else {
        inv_reg_inc_beta_seeded((z + 1) as f64, (n - z) as f64, level.upper_tail(), seeds.1)?
    };
    Ok((lower, upper))
}

fn to_pi_interval(config: &ModelConfig, rho_lower: f64, rho_upper: f64) -> IntervalEstimate {
    let q = config.q().get();
    let slope = 2.0 * q - 1.0;
    let raw_lower = (rho_upper - (1.0 - q)) / slope;
    let raw_upper = (rho_lower - (1.0 - q)) / slope;
    IntervalEstimate::from_raw(Method::Cp, raw_lower, raw_upper)
}

/// Exact equitailed interval for `pi` at observed count `z`.
pub fn cp_interval(
    config: &ModelConfig,
    z: ObservedCount,
    level: &ConfidenceLevel,
) -> Result<IntervalEstimate> {
    let (lo, hi) = rho_bounds(config.n(), z.get(), level, (None, None))?;
    Ok(to_pi_interval(config, lo, hi))
}

/// `upper - lower` of [`cp_interval`].
pub fn cp_length(config: &ModelConfig, z: ObservedCount, level: &ConfidenceLevel) -> Result<f64> {
    cp_interval(config, z, level).map(|ci| ci.length())
}

/// Exact intervals for every count in `counts`, in increasing count order.
///
/// Each quantile search is seeded from the neighbouring count's solution.
pub(crate) fn cp_intervals(
    config: &ModelConfig,
    level: &ConfidenceLevel,
    counts: RangeInclusive<u64>,
) -> Result<Vec<IntervalEstimate>> {
    let n = config.n();
    let step = 1.0 / n as f64;
    let mut out = Vec::with_capacity(counts.size_hint().0);
    let mut prev: Option<(f64, f64)> = None;
    for z in counts {
        let seeds = match prev {
            Some((lo, hi)) => (Some(lo + step), Some(hi + step)),
            None => (None, None),
        };
        let (lo, hi) = rho_bounds(n, z, level, seeds)?;
        prev = Some((lo, hi));
        out.push(to_pi_interval(config, lo, hi));
    }
    Ok(out)
}
