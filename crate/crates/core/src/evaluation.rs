//! Exact operating characteristics of an interval procedure at fixed `(n, q, delta)`.
//!
//! Intervals do not depend on `pi`, so they are tabulated once per
//! configuration and every `pi` is then a weighted sum over counts.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::ci_asymptotic::{ap_interval, wp_interval};
use crate::ci_exact::{cp_intervals, ConfidenceLevel, IntervalEstimate, Method};
use crate::error::{domain, Result};
use crate::model::{ModelConfig, ObservedCount};
use crate::numkernel::{binom_pmf_raw, KahanSum, Probability};

/// Characteristics of one procedure at one `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub pi: f64,
    /// `P{lower < pi < upper}`
    pub coverage: f64,
    /// `Σ_{z ∈ C(pi)} length(z) P{z}`
    pub expected_covering_length: f64,
    /// `(1/delta) Σ_{z ∈ C(pi)} P{z} 1(length(z) <= d)`; may exceed 1
    pub assured_length_prob: Option<f64>,
    /// the same sum before the `1/delta` normalization
    pub covering_short_mass: Option<f64>,
    /// `P{length <= d}` over all counts, covering or not
    pub length_prob: Option<f64>,
}

/// Intervals for a contiguous block of counts.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTable {
    config: ModelConfig,
    level: ConfidenceLevel,
    method: Method,
    first: u64,
    intervals: Vec<IntervalEstimate>,
}

impl IntervalTable {
    /// Intervals for every count `0..=n`.
    pub fn new(config: &ModelConfig, level: &ConfidenceLevel, method: Method) -> Result<Self> {
        Self::for_counts(config, level, method, 0..=config.n())
    }

    pub fn for_counts(
        config: &ModelConfig,
        level: &ConfidenceLevel,
        method: Method,
        counts: RangeInclusive<u64>,
    ) -> Result<Self> {
        if counts.is_empty() || *counts.end() > config.n() {
            return Err(domain(format!(
                "count range {counts:?} is not inside 0..={}",
                config.n()
            )));
        }
        let first = *counts.start();
        let intervals = match method {
            Method::Cp => cp_intervals(config, level, counts)?,
            Method::Wp | Method::Ap => counts
                .map(|z| {
                    let z = ObservedCount::new(z, config)?;
                    match method {
                        Method::Wp => wp_interval(config, z, level),
                        _ => ap_interval(config, z, level),
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(IntervalTable {
            config: *config,
            level: *level,
            method,
            first,
            intervals,
        })
    }

    /// Intervals for the counts carrying all but at most `2 * tail` of the
    /// probability at `pi`.
    pub fn around(
        config: &ModelConfig,
        level: &ConfidenceLevel,
        method: Method,
        pi: Probability,
        tail: f64,
    ) -> Result<Self> {
        Self::for_counts(config, level, method, count_window(config, pi, tail))
    }

    /// A table from precomputed intervals starting at count `first`.
    pub fn from_intervals(
        config: &ModelConfig,
        level: &ConfidenceLevel,
        method: Method,
        first: u64,
        intervals: Vec<IntervalEstimate>,
    ) -> Result<Self> {
        if intervals.is_empty() || first + intervals.len() as u64 - 1 > config.n() {
            return Err(domain("interval table does not fit inside 0..=n"));
        }
        Ok(IntervalTable {
            config: *config,
            level: *level,
            method,
            first,
            intervals,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn counts(&self) -> RangeInclusive<u64> {
        self.first..=self.first + self.intervals.len() as u64 - 1
    }

    pub fn interval(&self, z: u64) -> Option<&IntervalEstimate> {
        z.checked_sub(self.first)
            .and_then(|i| self.intervals.get(i as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &IntervalEstimate)> {
        (self.first..).zip(self.intervals.iter())
    }

    /// Sums over the tabulated counts only.
    pub fn evaluate(&self, pi: Probability, d: Option<f64>) -> EvaluationPoint {
        let n = self.config.n();
        let piv = pi.get();
        let (rho, comp) = self.config.rho_pair(piv);
        let mut coverage = KahanSum::default();
        let mut length = KahanSum::default();
        let mut covering_short = KahanSum::default();
        let mut short = KahanSum::default();
        for (z, ci) in self.iter() {
            let w = binom_pmf_raw(n, z, rho, comp);
            if w == 0.0 {
                continue;
            }
            let len = ci.length();
            let is_short = d.is_some_and(|d| len <= d);
            if is_short {
                short.add(w);
            }
            if ci.covers(piv) {
                coverage.add(w);
                length.add(w * len);
                if is_short {
                    covering_short.add(w);
                }
            }
        }
        let delta = self.level.get();
        EvaluationPoint {
            pi: piv,
            coverage: coverage.value().clamp(0.0, 1.0),
            expected_covering_length: length.value(),
            assured_length_prob: d.map(|_| covering_short.value() / delta),
            covering_short_mass: d.map(|_| covering_short.value()),
            length_prob: d.map(|_| short.value().clamp(0.0, 1.0)),
        }
    }
}

/// Count range outside which the Binomial(n, rho(pi)) mass on each side is at most `tail`.
///
/// Walks outward from the mode; the pmf ratio is monotone, so the remaining
/// tail is bounded by a geometric series.
pub fn count_window(config: &ModelConfig, pi: Probability, tail: f64) -> RangeInclusive<u64> {
    let n = config.n();
    let (rho, comp) = config.rho_pair(pi.get());
    if rho <= 0.0 {
        return 0..=0;
    }
    if comp <= 0.0 {
        return n..=n;
    }
    let pmf = |z: u64| binom_pmf_raw(n, z, rho, comp);
    let odds = rho / comp;
    let mode = (((n + 1) as f64 * rho).floor() as u64).min(n);

    let mut hi = mode;
    while hi < n {
        // ratio pmf(k+1)/pmf(k) at k = hi + 1 bounds all later ratios
        let next = hi + 1;
        let r = (n - next) as f64 / (next + 1) as f64 * odds;
        if r < 1.0 && pmf(next) / (1.0 - r) <= tail {
            break;
        }
        hi = next;
    }
    let mut lo = mode;
    while lo > 0 {
        let next = lo - 1;
        // ratio pmf(k-1)/pmf(k) at k = next
        let r = if next == 0 {
            0.0
        } else {
            next as f64 / (n - next + 1) as f64 / odds
        };
        if r < 1.0 && pmf(next) / (1.0 - r) <= tail {
            break;
        }
        lo = next;
    }
    lo..=hi
}

fn check_pi(pi: f64) -> Result<Probability> {
    if pi > 0.0 && pi < 1.0 {
        Probability::new(pi)
    } else {
        Err(domain(format!("pi must satisfy 0 < pi < 1, got {pi}")))
    }
}

fn check_length_bound(d: f64) -> Result<f64> {
    if d > 0.0 && d.is_finite() {
        Ok(d)
    } else {
        Err(domain(format!("length bound d must be positive, got {d}")))
    }
}

/// Exact coverage probability of `method` at `pi`.
pub fn coverage(
    config: &ModelConfig,
    level: &ConfidenceLevel,
    method: Method,
    pi: f64,
) -> Result<Probability> {
    let pi = check_pi(pi)?;
    let table = IntervalTable::new(config, level, method)?;
    Ok(Probability::clamped(table.evaluate(pi, None).coverage))
}

/// Expected length of the exact interval over the counts whose interval covers `pi`.
pub fn expected_covering_length(
    config: &ModelConfig,
    level: &ConfidenceLevel,
    pi: f64,
) -> Result<f64> {
    let pi = check_pi(pi)?;
    let table = IntervalTable::new(config, level, Method::Cp)?;
    Ok(table.evaluate(pi, None).expected_covering_length)
}

/// Probability, normalized by `1/delta`, that the exact interval covers `pi`
/// and is no longer than `d`.
pub fn assured_length_prob(
    config: &ModelConfig,
    level: &ConfidenceLevel,
    pi: f64,
    d: f64,
) -> Result<f64> {
    let pi = check_pi(pi)?;
    let d = check_length_bound(d)?;
    let table = IntervalTable::new(config, level, Method::Cp)?;
    Ok(table
        .evaluate(pi, Some(d))
        .assured_length_prob
        .unwrap_or_default())
}

/// `P{length of the exact interval <= d}` over all counts.
pub fn length_prob(config: &ModelConfig, level: &ConfidenceLevel, pi: f64, d: f64) -> Result<f64> {
    let pi = check_pi(pi)?;
    let d = check_length_bound(d)?;
    let table = IntervalTable::new(config, level, Method::Cp)?;
    Ok(table.evaluate(pi, Some(d)).length_prob.unwrap_or_default())
}

/// Arithmetic grid `start, start + step, ...` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PiGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(domain(format!("grid step must be positive, got {step}")));
        }
        if !(start > 0.0 && stop < 1.0) {
            return Err(domain(format!(
                "grid must lie inside (0, 1), got {start}:{stop}"
            )));
        }
        if start > stop {
            return Err(domain(format!(
                "empty grid: start {start} exceeds stop {stop}"
            )));
        }
        Ok(PiGrid { start, stop, step })
    }

    /// `start:stop:step` as on the command line.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| domain(format!("bad grid number '{s}'")))
        };
        match parts.as_slice() {
            [a] => {
                let v = num(a)?;
                PiGrid::new(v, v, 1.0)
            }
            [a, b, c] => PiGrid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(domain(format!(
                "grid must be start:stop:step, got '{spec}'"
            ))),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        // tolerate rounding in (stop - start) / step
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

/// One procedure evaluated along a grid of `pi` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCurve {
    pub method: Method,
    pub grid: Vec<EvaluationPoint>,
}

/// Evaluates every grid point against a single interval table.
pub fn curve(
    config: &ModelConfig,
    level: &ConfidenceLevel,
    method: Method,
    grid: &PiGrid,
    d: Option<f64>,
) -> Result<CoverageCurve> {
    let d = d.map(check_length_bound).transpose()?;
    let pis = grid
        .points()
        .into_iter()
        .map(check_pi)
        .collect::<Result<Vec<_>>>()?;
    if pis.is_empty() {
        return Err(domain("empty pi grid"));
    }
    let table = IntervalTable::new(config, level, method)?;
    Ok(CoverageCurve {
        method,
        grid: evaluate_many(&table, &pis, d),
    })
}

#[cfg(feature = "parallel")]
fn evaluate_many(
    table: &IntervalTable,
    pis: &[Probability],
    d: Option<f64>,
) -> Vec<EvaluationPoint> {
    use rayon::prelude::*;
    pis.par_iter().map(|&pi| table.evaluate(pi, d)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_many(
    table: &IntervalTable,
    pis: &[Probability],
    d: Option<f64>,
) -> Vec<EvaluationPoint> {
    pis.iter().map(|&pi| table.evaluate(pi, d)).collect()
}
