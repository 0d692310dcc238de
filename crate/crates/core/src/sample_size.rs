//! Smallest sample size meeting a length criterion at the binding design point.
//!
//! The worst case over `pi <= pi0` and admissible `q` sits at `pi = pi0`,
//! `q = q_min(pi0, gamma)`, so the search evaluates only there. Neither
//! criterion is monotone in `n`, which is why the search ends with a
//! downward linear scan instead of trusting the bisection.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::ci_exact::{ConfidenceLevel, Method};
use crate::error::{domain, Error, Result};
use crate::evaluation::IntervalTable;
use crate::model::ModelConfig;
use crate::numkernel::{normal_quantile, Probability};
use crate::privacy::{q_bound, q_min, PrivacySpec};

/// Counts whose probability at `pi0` is below this on either side are skipped.
pub const DEFAULT_TAIL: f64 = 1e-20;

/// Design-time inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub pi0: f64,
    pub gamma: f64,
    pub delta: f64,
    pub d: f64,
    pub lambda: Option<f64>,
}

impl DesignSpec {
    pub fn new(pi0: f64, gamma: f64, delta: f64, d: f64, lambda: Option<f64>) -> Result<Self> {
        PrivacySpec::new(pi0, gamma)?;
        ConfidenceLevel::new(delta)?;
        if !(d > 0.0 && d.is_finite()) {
            return Err(domain(format!("target length d must be positive, got {d}")));
        }
        if let Some(l) = lambda {
            if !(l > 0.0 && l < 1.0) {
                return Err(domain(format!(
                    "lambda must satisfy 0 < lambda < 1, got {l}"
                )));
            }
        }
        Ok(DesignSpec {
            pi0,
            gamma,
            delta,
            d,
            lambda,
        })
    }

    fn privacy(&self) -> Result<PrivacySpec> {
        PrivacySpec::new(self.pi0, self.gamma)
    }

    fn level(&self) -> Result<ConfidenceLevel> {
        ConfidenceLevel::new(self.delta)
    }

    pub fn q_used(&self) -> Result<Probability> {
        Ok(q_min(&self.privacy()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// expected covering length `<= d`
    Expected,
    /// normalized probability of a short covering interval `>= 1 - lambda`
    Assured,
}

impl Criterion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Criterion::Expected => "expected",
            Criterion::Assured => "assured",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "expected" => Ok(Criterion::Expected),
            "assured" => Ok(Criterion::Assured),
            _ => Err(domain(format!("unknown criterion '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Largest `n` tried before giving up.
    pub cap: u64,
    /// Per-side probability mass ignored when tabulating intervals.
    pub tail: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cap: 1_000_000,
            tail: DEFAULT_TAIL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSizeResult {
    pub criterion: Criterion,
    pub n_min: u64,
    pub criterion_value_at_n: f64,
    /// `None` when `n_min` is 1.
    pub criterion_value_at_n_minus_1: Option<f64>,
    pub q_used: Probability,
    /// Range covered by the confirming linear scan.
    pub scan_window: (u64, u64),
    pub evaluations: usize,
}

/// Evaluates one criterion at `(pi0, q_min)` for varying `n`.
#[derive(Debug)]
pub struct CriterionEvaluator {
    spec: DesignSpec,
    criterion: Criterion,
    level: ConfidenceLevel,
    pi0: Probability,
    q: Probability,
    threshold: f64,
    tail: f64,
    cache: HashMap<u64, f64>,
}

impl CriterionEvaluator {
    pub fn new(spec: &DesignSpec, criterion: Criterion, tail: f64) -> Result<Self> {
        let spec = DesignSpec::new(spec.pi0, spec.gamma, spec.delta, spec.d, spec.lambda)?;
        let threshold = match criterion {
            Criterion::Expected => spec.d,
            Criterion::Assured => {
                let lambda = spec
                    .lambda
                    .ok_or_else(|| domain("the assured criterion needs lambda"))?;
                1.0 - lambda
            }
        };
        Ok(CriterionEvaluator {
            level: spec.level()?,
            pi0: Probability::new(spec.pi0)?,
            q: spec.q_used()?,
            spec,
            criterion,
            threshold,
            tail,
            cache: HashMap::new(),
        })
    }

    pub fn q(&self) -> Probability {
        self.q
    }

    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }

    /// Criterion value at sample size `n`, not cached.
    pub fn compute(&self, n: u64) -> Result<f64> {
        value_at(
            &self.spec,
            self.criterion,
            &self.level,
            self.pi0,
            self.q.get(),
            n,
            self.tail,
        )
    }

    pub fn value(&mut self, n: u64) -> Result<f64> {
        if let Some(&v) = self.cache.get(&n) {
            return Ok(v);
        }
        let v = self.compute(n)?;
        self.cache.insert(n, v);
        Ok(v)
    }

    pub fn satisfied_by(&self, value: f64) -> bool {
        match self.criterion {
            Criterion::Expected => value <= self.threshold,
            Criterion::Assured => value >= self.threshold,
        }
    }

    pub fn holds(&mut self, n: u64) -> Result<bool> {
        let v = self.value(n)?;
        Ok(self.satisfied_by(v))
    }

    /// Fills the cache for several `n` at once.
    fn prefetch(&mut self, ns: &[u64]) -> Result<()> {
        let todo: Vec<u64> = ns
            .iter()
            .copied()
            .filter(|n| !self.cache.contains_key(n))
            .collect();
        for (n, v) in todo.iter().zip(self.compute_many(&todo)) {
            self.cache.insert(*n, v?);
        }
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn compute_many(&self, ns: &[u64]) -> Vec<Result<f64>> {
        use rayon::prelude::*;
        ns.par_iter().map(|&n| self.compute(n)).collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn compute_many(&self, ns: &[u64]) -> Vec<Result<f64>> {
        ns.iter().map(|&n| self.compute(n)).collect()
    }
}

fn value_at(
    spec: &DesignSpec,
    criterion: Criterion,
    level: &ConfidenceLevel,
    pi: Probability,
    q: f64,
    n: u64,
    tail: f64,
) -> Result<f64> {
    let config = ModelConfig::new(n, q)?;
    let table = IntervalTable::around(&config, level, Method::Cp, pi, tail)?;
    let point = table.evaluate(pi, Some(spec.d));
    Ok(match criterion {
        Criterion::Expected => point.expected_covering_length,
        Criterion::Assured => point.assured_length_prob.unwrap_or_default(),
    })
}

/// Starting scale from the large-sample variance of the moment estimator.
pub fn pilot(spec: &DesignSpec) -> Result<u64> {
    let q = spec.q_used()?.get();
    let u = normal_quantile(Probability::new(spec.level()?.upper_tail())?)?;
    let pi0 = spec.pi0;
    let var = pi0 * (1.0 - pi0) + q * (1.0 - q) / ((2.0 * q - 1.0) * (2.0 * q - 1.0));
    let n0 = (2.0 * u).powi(2) * var / (spec.d * spec.d);
    Ok(n0.ceil().max(1.0) as u64)
}

/// Smallest `n` with expected covering length at most `d`.
pub fn min_n_expected(spec: &DesignSpec) -> Result<SampleSizeResult> {
    search(spec, Criterion::Expected, &SearchOptions::default())
}

/// Smallest `n` with normalized short-and-covering probability at least `1 - lambda`.
pub fn min_n_assured(spec: &DesignSpec) -> Result<SampleSizeResult> {
    search(spec, Criterion::Assured, &SearchOptions::default())
}

/// Bracketing, bisection, then a confirming downward scan.
pub fn search(
    spec: &DesignSpec,
    criterion: Criterion,
    options: &SearchOptions,
) -> Result<SampleSizeResult> {
    let mut eval = CriterionEvaluator::new(spec, criterion, options.tail)?;
    let cap = options.cap.max(1);
    if eval.holds(1)? {
        return finish(&mut eval, criterion, 1, (1, 1));
    }

    // lo always fails, hi always holds
    let mut lo = 1;
    let mut hi = (pilot(spec)? / 4).max(2).min(cap);
    while !eval.holds(hi)? {
        if hi >= cap {
            return Err(Error::SearchExhausted { cap });
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(cap);
    }
    let floor = lo;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eval.holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let candidate = hi;
    let window = (candidate / 100).max(64);
    let mut best = candidate;
    let mut misses = 0;
    let mut m = candidate;
    const BATCH: u64 = 16;
    'scan: while m > floor + 1 && misses < window {
        let batch_low = m.saturating_sub(BATCH).max(floor + 1);
        let ns: Vec<u64> = (batch_low..m).rev().collect();
        eval.prefetch(&ns)?;
        for n in ns {
            m = n;
            if eval.holds(n)? {
                best = n;
                misses = 0;
            } else {
                misses += 1;
                if misses >= window {
                    break 'scan;
                }
            }
        }
    }
    finish(&mut eval, criterion, best, (m, candidate))
}

fn finish(
    eval: &mut CriterionEvaluator,
    criterion: Criterion,
    n: u64,
    scan_window: (u64, u64),
) -> Result<SampleSizeResult> {
    let at_n = eval.value(n)?;
    let before = if n > 1 {
        Some(eval.value(n - 1)?)
    } else {
        None
    };
    Ok(SampleSizeResult {
        criterion,
        n_min: n,
        criterion_value_at_n: at_n,
        criterion_value_at_n_minus_1: before,
        q_used: eval.q(),
        scan_window,
        evaluations: eval.evaluations(),
    })
}

/// First `n` in `range` meeting the criterion, checking every `n` in order.
pub fn linear_scan(
    spec: &DesignSpec,
    criterion: Criterion,
    range: RangeInclusive<u64>,
) -> Result<Option<u64>> {
    let mut eval = CriterionEvaluator::new(spec, criterion, DEFAULT_TAIL)?;
    for n in range {
        if eval.holds(n.max(1))? {
            return Ok(Some(n.max(1)));
        }
    }
    Ok(None)
}

/// A grid point of the design region where the criterion fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridViolation {
    pub pi: f64,
    pub q: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub n: u64,
    pub points_checked: usize,
    pub violations: Vec<GridViolation>,
}

/// Re-checks the criterion at `n` on a `steps x steps` grid over
/// `pi in (0, pi0]` and `q in [q_min(pi, gamma), 0.5)`.
pub fn check_design_grid(
    spec: &DesignSpec,
    criterion: Criterion,
    n: u64,
    steps: usize,
) -> Result<GridReport> {
    let eval = CriterionEvaluator::new(spec, criterion, DEFAULT_TAIL)?;
    let steps = steps.max(1);
    let mut points = 0;
    let mut violations = Vec::new();
    for i in 1..=steps {
        let pi = spec.pi0 * i as f64 / steps as f64;
        let q_lo = q_bound(pi, spec.gamma);
        for j in 0..steps {
            // stay clear of q = 0.5 where the model is uninformative
            let q = q_lo + (0.5 - q_lo) * 0.9 * j as f64 / steps as f64;
            let value = value_at(
                spec,
                criterion,
                &eval.level,
                Probability::new(pi)?,
                q,
                n,
                DEFAULT_TAIL,
            )?;
            points += 1;
            if !eval.satisfied_by(value) {
                violations.push(GridViolation { pi, q, value });
            }
        }
    }
    Ok(GridReport {
        n,
        points_checked: points,
        violations,
    })
}
