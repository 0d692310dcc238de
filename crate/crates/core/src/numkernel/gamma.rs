use std::f64::consts::PI;

/// ln(sqrt(2 pi))
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Stirling-series remainder:
/// `ln Γ(z) - [(z - 1/2) ln z - z + ln sqrt(2 pi)]`.
///
/// Small for large `z`, so callers can combine several of them without the
/// cancellation that plagues differences of raw `ln_gamma` values.
pub(crate) fn stirling_error(z: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;

    if z <= 15.0 {
        return ln_gamma(z) - (z - 0.5) * z.ln() + z - LN_SQRT_2PI;
    }
    let zz = z * z;
    if z > 500.0 {
        (S0 - S1 / zz) / z
    } else if z > 80.0 {
        (S0 - (S1 - S2 / zz) / zz) / z
    } else if z > 35.0 {
        (S0 - (S1 - (S2 - S3 / zz) / zz) / zz) / z
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / zz) / zz) / zz) / zz) / z
    }
}
