//! Regularized incomplete Beta function and its inverse.

use std::f64::consts::PI;

use super::gamma::stirling_error;
use super::{BetaParams, Probability};
use crate::error::{Error, Result};

const CF_MAX_ITER: usize = 200;
const QUANTILE_MAX_ITER: usize = 200;
/// Root-finder stopping rule, measured on the CDF scale.
const QUANTILE_TOL: f64 = 1e-12;
const TINY: f64 = 1e-300;

/// `x^a y^b / B(a, b)` with `y = 1 - x`.
///
/// Written as `sqrt(ab / (2 pi (a+b))) * exp(a ln(x(a+b)/a) + b ln(y(a+b)/b) + corr)`
/// where `corr` combines Stirling remainders; no large logs cancel.
fn power_terms(a: f64, b: f64, x: f64, y: f64) -> f64 {
    let c = a + b;
    let dev = x * b - y * a;
    // ln_1p only near the mode; far from it `dev / a` loses the digits of x
    let log_ratio = |num: f64, rel: f64, shape: f64| {
        let r = num * c / shape;
        if (r - 1.0).abs() < 0.5 {
            rel.ln_1p()
        } else {
            r.ln()
        }
    };
    let l = a * log_ratio(x, dev / a, a) + b * log_ratio(y, -dev / b, b);
    let corr = stirling_error(c) - stirling_error(a) - stirling_error(b);
    (a * b / (c * 2.0 * PI)).sqrt() * (l + corr).exp()
}

/// Continued fraction for `I_x(a, b)` (modified Lentz).
fn continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::Numeric(format!(
        "incomplete beta continued fraction did not converge in {CF_MAX_ITER} iterations (a={a}, b={b}, x={x})"
    )))
}

pub(crate) fn reg_inc_beta_raw(a: f64, b: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let y = 1.0 - x;
    let v = if x < (a + 1.0) / (a + b + 2.0) {
        power_terms(a, b, x, y) / a * continued_fraction(a, b, x)?
    } else {
        1.0 - power_terms(b, a, y, x) / b * continued_fraction(b, a, y)?
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Regularized incomplete Beta function `I_x(a, b)`, the CDF of Beta(a, b).
pub fn reg_inc_beta(params: BetaParams, x: Probability) -> Result<Probability> {
    reg_inc_beta_raw(params.a(), params.b(), x.get()).map(Probability::clamped)
}

fn initial_guess(a: f64, b: f64, p: f64) -> f64 {
    if a >= 1.0 && b >= 1.0 {
        let pp = if p < 0.5 { p } else { 1.0 - p };
        let t = (-2.0 * pp.ln()).sqrt();
        let mut z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if p < 0.5 {
            z = -z;
        }
        let al = (z * z - 3.0) / 6.0;
        let h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        let w = z * (al + h).sqrt() / h
            - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        a / (a + b * (2.0 * w).exp())
    } else {
        let lna = (a / (a + b)).ln();
        let lnb = (b / (a + b)).ln();
        let t = (a * lna).exp() / a;
        let u = (b * lnb).exp() / b;
        let w = t + u;
        if p < t / w {
            (a * w * p).powf(1.0 / a)
        } else {
            1.0 - (b * w * (1.0 - p)).powf(1.0 / b)
        }
    }
}

pub(crate) fn inv_reg_inc_beta_raw(a: f64, b: f64, p: f64) -> Result<f64> {
    inv_reg_inc_beta_seeded(a, b, p, None)
}

/// Quantile search started from `seed` when it is supplied and lies in (0, 1).
pub(crate) fn inv_reg_inc_beta_seeded(a: f64, b: f64, p: f64, seed: Option<f64>) -> Result<f64> {
    if p <= 0.0 {
        return Ok(0.0);
    }
    if p >= 1.0 {
        return Ok(1.0);
    }
    // F(lo) < p < F(hi) throughout.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x = match seed {
        Some(s) if s > 0.0 && s < 1.0 => s,
        _ => initial_guess(a, b, p),
    };
    if !(x > lo && x < hi) {
        x = 0.5;
    }
    let mut best = (x, f64::INFINITY);
    for _ in 0..QUANTILE_MAX_ITER {
        let f = reg_inc_beta_raw(a, b, x)? - p;
        if f.abs() < best.1 {
            best = (x, f.abs());
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let y = 1.0 - x;
        let density = power_terms(a, b, x, y) / (x * y);
        let newton = x - f / density;
        if f.abs() <= QUANTILE_TOL {
            // one unchecked Newton step so the result does not depend on the starting point
            return Ok(if newton >= lo && newton <= hi {
                newton
            } else {
                x
            });
        }
        let next = if density.is_finite() && density > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || next <= lo || next >= hi {
            // the bracket has shrunk to adjacent doubles: nothing closer is representable
            return Ok(best.0);
        }
        x = next;
    }
    Err(Error::Numeric(format!(
        "beta quantile did not converge in {QUANTILE_MAX_ITER} iterations (a={a}, b={b}, p={p})"
    )))
}

/// Quantile of Beta(a, b): `x` with `I_x(a, b) = p` to within 1e-12 on the
/// CDF scale (or the closest representable `x` when the CDF is steeper than
/// the double grid allows).
pub fn inv_reg_inc_beta(params: BetaParams, p: Probability) -> Result<Probability> {
    inv_reg_inc_beta_raw(params.a(), params.b(), p.get()).map(Probability::clamped)
}
