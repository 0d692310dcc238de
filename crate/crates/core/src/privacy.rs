//! Disclosure risk of a crosswise report and the admissible range of `q`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numkernel::Probability;

/// Tolerated disclosure probability `gamma` and prior bound `pi0` on `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacySpec {
    gamma: Probability,
    pi0: Probability,
}

impl PrivacySpec {
    /// Requires `0 < pi0 < gamma < 1`; `gamma <= pi0` is reported as infeasible.
    pub fn new(pi0: f64, gamma: f64) -> Result<Self> {
        if !(pi0 > 0.0 && pi0 < 1.0) {
            return Err(domain(format!("pi0 must satisfy 0 < pi0 < 1, got {pi0}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(domain(format!(
                "gamma must satisfy 0 < gamma < 1, got {gamma}"
            )));
        }
        if gamma <= pi0 {
            return Err(Error::Infeasible { pi0, gamma });
        }
        Ok(PrivacySpec {
            gamma: Probability::new(gamma)?,
            pi0: Probability::new(pi0)?,
        })
    }

    pub fn gamma(&self) -> Probability {
        self.gamma
    }

    pub fn pi0(&self) -> Probability {
        self.pi0
    }
}

/// `P{Y = 1 | Z = 1}` and `P{Y = 1 | Z = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisclosureProbabilities {
    pub p11: f64,
    pub p10: f64,
}

/// Posterior probability of a sensitive YES given each possible report.
pub fn disclosure_probabilities(
    pi: Probability,
    q: Probability,
) -> Result<DisclosureProbabilities> {
    let (pi, q) = (pi.get(), q.get());
    if !(pi > 0.0 && pi < 1.0) {
        return Err(domain(format!(
            "disclosure probabilities need 0 < pi < 1, got {pi}"
        )));
    }
    if !(q > 0.0 && q < 0.5) {
        return Err(domain(format!(
            "disclosure probabilities need 0 < q < 0.5, got {q}"
        )));
    }
    let p11 = pi * q / (pi * q + (1.0 - pi) * (1.0 - q));
    let p10 = pi * (1.0 - q) / (pi * (1.0 - q) + (1.0 - pi) * q);
    Ok(DisclosureProbabilities { p11, p10 })
}

/// `q(pi; gamma) = pi(1 - gamma) / (gamma(1 - 2 pi) + pi)`: the smallest `q`
/// keeping `P{Y = 1 | Z = 0} <= gamma` at prevalence `pi`.
pub fn q_bound(pi: f64, gamma: f64) -> f64 {
    pi * (1.0 - gamma) / (gamma * (1.0 - 2.0 * pi) + pi)
}

/// Lower edge of the admissible design region `[q_min, 0.5)`.
///
/// `P{Y = 1 | Z = 0}` increases in `pi`, so the bound at `pi0` covers all of `(0, pi0]`.
pub fn q_min(spec: &PrivacySpec) -> Probability {
    Probability::clamped(q_bound(spec.pi0.get(), spec.gamma.get()))
}
