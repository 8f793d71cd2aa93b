use super::{is_nonpositive_integer, sum_series, SeriesControl};
use crate::{ComplexValue, Error, Result};

/// Distance from the unit circle below which the Gauss series is refused.
pub const GAUSS_2F1_MARGIN: f64 = 1e-3;

/// Gauss hypergeometric function from its power series,
/// `sum_n (a)_n (b)_n / ((c)_n n!) z^n`, for `|z| < 1 - GAUSS_2F1_MARGIN`.
pub fn gauss_2f1(
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    z: ComplexValue,
    ctl: &SeriesControl,
) -> Result<ComplexValue> {
    if is_nonpositive_integer(c) {
        return Err(Error::DegenerateParameter(format!(
            "2F1 with c = {c} a non-positive integer"
        )));
    }
    if z.norm() >= 1.0 - GAUSS_2F1_MARGIN {
        return Err(Error::Domain {
            function: "gauss_2f1",
            reason: format!(
                "|z| = {} outside the disk of radius {}",
                z.norm(),
                1.0 - GAUSS_2F1_MARGIN
            ),
        });
    }
    sum_series("gauss_2f1", ComplexValue::new(1.0, 0.0), ctl, |k, term| {
        let k = k as f64;
        term * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
    })
}

/// `d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)`.
pub fn gauss_2f1_derivative(
    a: ComplexValue,
    b: ComplexValue,
    c: ComplexValue,
    z: ComplexValue,
    ctl: &SeriesControl,
) -> Result<ComplexValue> {
    Ok(a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z, ctl)?)
}
