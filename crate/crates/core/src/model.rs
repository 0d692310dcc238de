//! The crosswise reporting model.
//!
//! A respondent reports `Z = 1` when the answers to the sensitive and the
//! neutral question agree, so `P{Z = 1} = rho = (2q - 1) pi + (1 - q)`. All
//! distribution work below is indexed by the observed count `z = Σ Z_i`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numkernel::{binom_pmf_raw, reg_inc_beta_raw, KahanSum, Probability};

/// One survey instrument: sample size `n` and neutral-question probability `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    n: u64,
    q: Probability,
}

impl ModelConfig {
    /// Requires `n >= 1` and `0 < q < 0.5`.
    pub fn new(n: u64, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("sample size n must be at least 1"));
        }
        if !(q > 0.0 && q < 0.5) {
            return Err(domain(format!(
                "neutral probability q must satisfy 0 < q < 0.5, got {q}"
            )));
        }
        Ok(ModelConfig {
            n,
            q: Probability::new(q)?,
        })
    }

    /// The degenerate instrument with `q = 0`: the report is the negated
    /// sensitive answer, so `rho = 1 - pi`. Useful for checking the exact
    /// interval against textbook binomial constructions.
    pub fn identity_flip(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain("sample size n must be at least 1"));
        }
        Ok(ModelConfig {
            n,
            q: Probability::ZERO,
        })
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> Probability {
        self.q
    }

    /// Largest count whose estimate is clipped to 1, i.e. `⌊nq⌋`.
    ///
    /// `nq` is snapped to the nearest integer when it is within rounding
    /// noise of one, so `n = 100, q = 0.3` gives exactly 30.
    pub fn ones_max(&self) -> u64 {
        let v = self.n as f64 * self.q.get();
        let r = v.round();
        if (v - r).abs() <= 1e-9 * v.max(1.0) {
            r as u64
        } else {
            v.floor() as u64
        }
    }

    /// Smallest count whose estimate is clipped to 0, i.e. `⌈n(1 - q)⌉`.
    pub fn zeros_min(&self) -> u64 {
        self.n - self.ones_max()
    }

    /// `(rho, 1 - rho)` at `pi`, each computed without subtraction from 1.
    pub(crate) fn rho_pair(&self, pi: f64) -> (f64, f64) {
        let q = self.q.get();
        let rho = (1.0 - q) - (1.0 - 2.0 * q) * pi;
        let comp = q + (1.0 - 2.0 * q) * pi;
        (rho, comp)
    }
}

/// Number of respondents reporting `Z = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObservedCount(u64);

impl ObservedCount {
    pub fn new(z: u64, config: &ModelConfig) -> Result<Self> {
        if z > config.n() {
            return Err(domain(format!(
                "observed count z = {z} exceeds n = {}",
                config.n()
            )));
        }
        Ok(ObservedCount(z))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

/// `rho = (2q - 1) pi + (1 - q)`.
pub fn rho_from_pi(pi: Probability, q: Probability) -> Probability {
    let (q, pi) = (q.get(), pi.get());
    Probability::clamped((2.0 * q - 1.0) * pi + (1.0 - q))
}

/// `pi = (rho - (1 - q)) / (2q - 1)`; the result is not clipped.
pub fn pi_from_rho(rho: Probability, q: Probability) -> Result<f64> {
    let q = q.get();
    if q == 0.5 {
        return Err(domain("q = 0.5 makes pi unidentifiable"));
    }
    Ok((rho.get() - (1.0 - q)) / (2.0 * q - 1.0))
}

/// Maximum-likelihood estimate of `pi`: the moment estimate clipped to `[0, 1]`.
pub fn mle(config: &ModelConfig, z: ObservedCount) -> Probability {
    let z = z.get();
    if z >= config.zeros_min() {
        return Probability::ZERO;
    }
    if z <= config.ones_max() {
        return Probability::ONE;
    }
    let q = config.q().get();
    let rho_hat = z as f64 / config.n() as f64;
    Probability::clamped((rho_hat - (1.0 - q)) / (2.0 * q - 1.0))
}

/// Exact distribution of the MLE: atoms in increasing order of the estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorDistribution {
    pub support: Vec<f64>,
    pub mass: Vec<f64>,
}

impl EstimatorDistribution {
    pub fn total_mass(&self) -> f64 {
        self.mass.iter().copied().collect::<KahanSum>().value()
    }

    /// `P{estimate <= x}` by summing atoms.
    pub fn cdf(&self, x: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.mass)
            .filter(|(s, _)| **s <= x)
            .map(|(_, m)| *m)
            .collect::<KahanSum>()
            .value()
    }
}

/// The pmf of the MLE at `pi`.
///
/// The atom at 0 collects counts `z >= ⌈n(1-q)⌉`, the atom at 1 collects
/// `z <= ⌊nq⌋`, and every count in between is its own atom.
pub fn estimator_distribution(config: &ModelConfig, pi: Probability) -> EstimatorDistribution {
    let n = config.n();
    let (rho, comp) = config.rho_pair(pi.get());
    let pmf = |z: u64| binom_pmf_raw(n, z, rho, comp);
    let (lo, hi) = (config.ones_max(), config.zeros_min());

    let mut support = Vec::with_capacity((hi - lo + 1) as usize);
    let mut mass = Vec::with_capacity(support.capacity());

    support.push(0.0);
    mass.push((hi..=n).map(pmf).collect::<KahanSum>().value());
    for z in (lo + 1..hi).rev() {
        support.push(mle(config, ObservedCount(z)).get());
        mass.push(pmf(z));
    }
    support.push(1.0);
    mass.push((0..=lo).map(pmf).collect::<KahanSum>().value());

    EstimatorDistribution { support, mass }
}

/// Smallest count whose estimate does not exceed `x` (`n + 1` if none).
fn first_count_at_or_below(config: &ModelConfig, x: f64) -> u64 {
    let n = config.n();
    let q = config.q().get();
    // u = n(x(2q-1) + (1-q)); the estimate at count z is <= x iff z >= ⌈u⌉,
    // up to rounding, which the two adjustment loops settle exactly.
    let u = n as f64 * (x * (2.0 * q - 1.0) + (1.0 - q));
    let mut k = u.ceil().clamp(0.0, (n + 1) as f64) as u64;
    while k > 0 && mle(config, ObservedCount(k - 1)).get() <= x {
        k -= 1;
    }
    while k <= n && mle(config, ObservedCount(k)).get() > x {
        k += 1;
    }
    k
}

/// `P{count >= k}` through the Beta form `B(k, n - k + 1; rho)`.
fn upper_count_tail(config: &ModelConfig, k: u64, rho: f64) -> Result<f64> {
    let n = config.n();
    if k == 0 {
        return Ok(1.0);
    }
    if k > n {
        return Ok(0.0);
    }
    reg_inc_beta_raw(k as f64, (n - k + 1) as f64, rho)
}

/// `F_pi(x) = P{estimate <= x}` for `x` in `[0, 1]`.
pub fn estimator_cdf(config: &ModelConfig, pi: Probability, x: f64) -> Result<Probability> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("estimate x must lie in [0, 1], got {x}")));
    }
    if x >= 1.0 {
        return Ok(Probability::ONE);
    }
    let k = first_count_at_or_below(config, x);
    let (rho, _) = config.rho_pair(pi.get());
    upper_count_tail(config, k, rho).map(Probability::clamped)
}

/// `P{estimate < x}` for `x` in `[0, 1]`.
pub fn estimator_cdf_strict(config: &ModelConfig, pi: Probability, x: f64) -> Result<Probability> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("estimate x must lie in [0, 1], got {x}")));
    }
    if x <= 0.0 {
        return Ok(Probability::ZERO);
    }
    // estimate < x  <=>  count > largest count whose estimate is >= x
    let x_below = f64::from_bits(x.to_bits() - 1);
    let k = first_count_at_or_below(config, x_below);
    let (rho, _) = config.rho_pair(pi.get());
    upper_count_tail(config, k, rho).map(Probability::clamped)
}
