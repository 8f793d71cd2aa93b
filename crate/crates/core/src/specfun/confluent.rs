//! Kummer `1F1`, Tricomi `U` and the Whittaker functions built on them.

use super::{cpow, gamma, is_integer, is_nonpositive_integer, ln_gamma, rgamma, sum_series, SeriesControl};
use crate::{ComplexValue, Error, Result};

/// Above this modulus the asymptotic series for `U` is tried first; it is
/// only accepted once its terms fall below the series tolerance.
const TRICOMI_ASYMPTOTIC_RADIUS: f64 = 10.0;

/// Largest tolerated `(|first| + |second|) / |U|` in the connection formula.
const TRICOMI_CANCELLATION_LIMIT: f64 = 1e6;

fn one() -> ComplexValue {
    ComplexValue::new(1.0, 0.0)
}

/// Kummer's confluent hypergeometric function
/// `1F1(a; b; z) = sum_k (a)_k / (b)_k z^k / k!`.
///
/// For `Re z < 0` Kummer's transformation `e^z 1F1(b - a; b; -z)` is summed
/// instead, so the series never alternates in sign for real arguments.
pub fn kummer_m(a: ComplexValue, b: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain {
            function: "kummer_m",
            reason: format!("b = {b} is a non-positive integer"),
        });
    }
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * kummer_series(b - a, b, -z, ctl)?);
    }
    kummer_series(a, b, z, ctl)
}

fn kummer_series(a: ComplexValue, b: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    sum_series("kummer_m", one(), ctl, |k, term| {
        let k = k as f64;
        term * (a + k) / ((b + k) * (k + 1.0)) * z
    })
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)`.
///
/// - terminating cases (`a` or `a - b + 1` a non-positive integer) are
///   summed exactly from the asymptotic series, which is then a polynomial
///   in `1/z`;
/// - for `|z| > 10` the asymptotic series `z^-a sum_s (a)_s (a-b+1)_s / s!
///   (-z)^-s` is used if it reaches the series tolerance before its terms
///   start to grow;
/// - otherwise the connection formula
///   `U = G(1-b)/G(a-b+1) M(a,b,z) + G(b-1)/G(a) z^(1-b) M(a-b+1,2-b,z)`
///   is used. It is undefined for integer `b` and is refused when its two
///   terms cancel by more than six digits.
pub fn tricomi_u(a: ComplexValue, b: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain {
            function: "tricomi_u",
            reason: format!("z = {z} on the branch cut"),
        });
    }
    let a2 = a - b + 1.0;
    if is_nonpositive_integer(a) || is_nonpositive_integer(a2) {
        let n = if is_nonpositive_integer(a) { -a.re } else { -a2.re };
        return Ok(tricomi_terminating(a, a2, z, n as usize));
    }
    if z.norm() > TRICOMI_ASYMPTOTIC_RADIUS {
        if let Some(value) = tricomi_asymptotic(a, a2, z, ctl) {
            return Ok(value);
        }
    }
    if is_integer(b) {
        return Err(Error::DegenerateParameter(format!(
            "tricomi_u connection formula needs non-integer b (b = {b})"
        )));
    }
    let first = gamma_ratio(one() - b, a2) * kummer_m(a, b, z, ctl)?;
    let second = gamma_ratio(b - 1.0, a) * cpow(z, one() - b) * kummer_m(a2, ComplexValue::new(2.0, 0.0) - b, z, ctl)?;
    let value = first + second;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Convergence {
            function: "tricomi_u",
            reason: "non-finite connection-formula value".into(),
        });
    }
    if first.norm() + second.norm() > TRICOMI_CANCELLATION_LIMIT * value.norm() {
        return Err(Error::Convergence {
            function: "tricomi_u",
            reason: format!("connection formula cancels: |{first}| + |{second}| against |{value}|"),
        });
    }
    Ok(value)
}

/// `Gamma(p) / Gamma(q)`. Real arguments go through the real reflection
/// formula so the ratio carries no spurious branch phase.
fn gamma_ratio(p: ComplexValue, q: ComplexValue) -> ComplexValue {
    if p.im == 0.0 && q.im == 0.0 && p.re.abs() < 150.0 && q.re.abs() < 150.0 {
        return ComplexValue::new((gamma(p) * rgamma(q)).re, 0.0);
    }
    (ln_gamma(p) - ln_gamma(q)).exp()
}

fn tricomi_terminating(a: ComplexValue, a2: ComplexValue, z: ComplexValue, n: usize) -> ComplexValue {
    let inv = -one() / z;
    let mut term = one();
    let mut sum = one();
    for s in 0..n {
        let s = s as f64;
        term *= (a + s) * (a2 + s) / (s + 1.0) * inv;
        sum += term;
    }
    cpow(z, -a) * sum
}

fn tricomi_asymptotic(a: ComplexValue, a2: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Option<ComplexValue> {
    let inv = -one() / z;
    let mut term = one();
    let mut sum = one();
    let mut previous = f64::INFINITY;
    for s in 0..ctl.max_terms() {
        let sf = s as f64;
        let next = term * (a + sf) * (a2 + sf) / (sf + 1.0) * inv;
        let size = next.norm();
        if size >= previous {
            // past the smallest term of a divergent series
            return None;
        }
        previous = size;
        term = next;
        sum += term;
        if size <= ctl.rel_tol() * sum.norm() {
            return Some(cpow(z, -a) * sum);
        }
    }
    None
}

/// Whittaker function of the first kind,
/// `M(a, b, z) = e^(-z/2) z^(b+1/2) 1F1(b - a + 1/2; 1 + 2b; z)`.
pub fn whittaker_m(a: ComplexValue, b: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    let prefactor = (-z * 0.5).exp() * cpow(z, b + 0.5);
    Ok(prefactor * kummer_m(b - a + 0.5, b * 2.0 + 1.0, z, ctl)?)
}

/// Whittaker function of the second kind,
/// `W(a, b, z) = e^(-z/2) z^(b+1/2) U(b - a + 1/2, 1 + 2b, z)`.
pub fn whittaker_w(a: ComplexValue, b: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    let prefactor = (-z * 0.5).exp() * cpow(z, b + 0.5);
    Ok(prefactor * tricomi_u(b - a + 0.5, b * 2.0 + 1.0, z, ctl)?)
}

/// `M'(a,b,z) = (1/2 - a/z) M(a,b,z) + (1/2 + a + b)/z M(a+1,b,z)`.
pub fn whittaker_m_derivative(
    a: ComplexValue,
    b: ComplexValue,
    z: ComplexValue,
    ctl: &SeriesControl,
) -> Result<ComplexValue> {
    let m0 = whittaker_m(a, b, z, ctl)?;
    let m1 = whittaker_m(a + 1.0, b, z, ctl)?;
    Ok((0.5 - a / z) * m0 + (a + b + 0.5) / z * m1)
}

/// `W'(a,b,z) = (1/2 - a/z) W(a,b,z) - W(a+1,b,z)/z`.
pub fn whittaker_w_derivative(
    a: ComplexValue,
    b: ComplexValue,
    z: ComplexValue,
    ctl: &SeriesControl,
) -> Result<ComplexValue> {
    let w0 = whittaker_w(a, b, z, ctl)?;
    let w1 = whittaker_w(a + 1.0, b, z, ctl)?;
    Ok((0.5 - a / z) * w0 - w1 / z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn r(x: f64) -> ComplexValue {
        c(x, 0.0)
    }

    fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn kummer_identities() {
        assert_eq!(kummer_m(c(0.3, 1.0), c(2.0, -1.0), r(0.0), &ctl()).unwrap(), r(1.0));
        assert!(
            rel(
                kummer_m(r(1.0), r(1.0), r(1.0), &ctl()).unwrap(),
                r(std::f64::consts::E)
            ) < 1e-13
        );
        // 1F1(a; a; z) = e^z, negative argument goes through Kummer's transform
        assert!(rel(kummer_m(r(2.3), r(2.3), r(-7.0), &ctl()).unwrap(), r((-7.0f64).exp())) < 1e-12);
        assert!(
            rel(
                kummer_m(r(0.9), r(2.4), r(0.5), &ctl()).unwrap(),
                r(1.216_853_380_956_573_5)
            ) < 1e-13
        );
        assert!(matches!(
            kummer_m(r(1.0), r(-1.0), r(0.5), &ctl()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn tricomi_reference_values() {
        // U(0, b, z) = 1
        assert_eq!(tricomi_u(r(0.0), c(1.7, 0.2), r(3.0), &ctl()).unwrap(), r(1.0));
        // U(1, 2, z) = 1/z
        assert!(rel(tricomi_u(r(1.0), r(2.0), r(1.0), &ctl()).unwrap(), r(1.0)) < 1e-15);
        assert!(rel(tricomi_u(r(1.0), r(2.0), r(4.0), &ctl()).unwrap(), r(0.25)) < 1e-15);
        // mpmath hyperu(0.7+0.2j, 1.3-0.4j, 3.0)
        let got = tricomi_u(c(0.7, 0.2), c(1.3, -0.4), r(3.0), &ctl()).unwrap();
        assert!(rel(got, c(0.414_310_825_913_772_2, -0.149_278_782_224_881_5)) < 1e-11);
        // asymptotic branch: mpmath hyperu(1.2, 2.6, 60)
        let got = tricomi_u(r(1.2), r(2.6), r(60.0), &ctl()).unwrap();
        assert!(rel(got, r(0.007_406_996_641_205_204)) < 1e-12);
    }

    #[test]
    fn tricomi_integer_b_is_degenerate_unless_terminating() {
        assert!(matches!(
            tricomi_u(r(0.4), r(2.0), r(1.5), &ctl()),
            Err(Error::DegenerateParameter(_))
        ));
        // U(1, 2, 1) from the connection formula with b nudged off the integer
        let eps = 1e-6;
        let up = tricomi_u(r(1.0), r(2.0 + eps), r(1.0), &ctl()).unwrap();
        let down = tricomi_u(r(1.0), r(2.0 - eps), r(1.0), &ctl()).unwrap();
        assert!(((up + down) * 0.5 - r(1.0)).norm() < 1e-6);
    }

    #[test]
    fn whittaker_reference_values() {
        // mpmath whitm / whitw at (0.3, 0.7, 0.5)
        let m = whittaker_m(r(0.3), r(0.7), r(0.5), &ctl()).unwrap();
        assert!(rel(m, r(0.412_504_449_862_519_46)) < 1e-13);
        let w = whittaker_w(r(0.3), r(0.7), r(0.5), &ctl()).unwrap();
        assert!(rel(w, r(1.011_401_080_197_945_6)) < 1e-11);
        let w = whittaker_w(c(0.3, 0.5), c(0.0, 0.2), r(4.0), &ctl()).unwrap();
        assert!(rel(w, c(0.156_615_682_779_760_7, 0.142_834_292_262_164_8)) < 1e-11);
    }

    #[test]
    fn whittaker_m_normalisation() {
        let (a, b, z) = (r(0.3), r(0.7), r(0.5));
        let m = whittaker_m(a, b, z, &ctl()).unwrap();
        let scaled = m / ((-z * 0.5).exp() * cpow(z, b + 0.5));
        let f = kummer_m(r(0.9), r(2.4), r(0.5), &ctl()).unwrap();
        assert!(rel(scaled, f) < 1e-14);
    }
}
