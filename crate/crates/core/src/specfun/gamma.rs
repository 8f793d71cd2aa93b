//! Complex gamma function via the Lanczos approximation (g = 7, 9 terms)
//! with reflection for `Re z < 1/2`.

use std::f64::consts::PI;

use super::is_nonpositive_integer;
use crate::ComplexValue;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(z)`, defined up to a multiple of `2 pi i`. Only differences and
/// exponentials of it are meaningful.
pub fn ln_gamma(z: ComplexValue) -> ComplexValue {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return ComplexValue::new(PI.ln(), 0.0) - s.ln() - ln_gamma(ComplexValue::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = ComplexValue::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `Gamma(z)`; infinite at the poles `0, -1, -2, ...`.
pub fn gamma(z: ComplexValue) -> ComplexValue {
    if is_nonpositive_integer(z) {
        return ComplexValue::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        return PI / ((z * PI).sin() * gamma(ComplexValue::new(1.0, 0.0) - z));
    }
    ln_gamma(z).exp()
}

/// `1 / Gamma(z)`; zero at the poles of `Gamma`.
pub fn rgamma(z: ComplexValue) -> ComplexValue {
    if is_nonpositive_integer(z) {
        return ComplexValue::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        return (z * PI).sin() * gamma(ComplexValue::new(1.0, 0.0) - z) / PI;
    }
    (-ln_gamma(z)).exp()
}
