use super::{cpow, is_integer, rgamma, sum_series, SeriesControl};
use crate::{ComplexValue, Error, Result};

/// Modified Bessel function of the first kind,
/// `I(a, z) = sum_k (z/2)^(a+2k) / (k! Gamma(a+k+1))`.
///
/// Negative integer orders use `I(-n, z) = I(n, z)`.
pub fn bessel_i(order: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    let order = if is_integer(order) && order.re < 0.0 {
        -order
    } else {
        order
    };
    let zero = ComplexValue::new(0.0, 0.0);
    if z == zero {
        if order == zero {
            return Ok(ComplexValue::new(1.0, 0.0));
        }
        if order.re > 0.0 {
            return Ok(zero);
        }
        return Err(Error::Domain {
            function: "bessel_i",
            reason: format!("z = 0 with Re(order) <= 0 (order = {order})"),
        });
    }
    let half = z * 0.5;
    let first = cpow(half, order) * rgamma(order + 1.0);
    let quarter_sq = half * half;
    sum_series("bessel_i", first, ctl, |k, term| {
        let k1 = (k + 1) as f64;
        term * quarter_sq / ((order + k1) * k1)
    })
}

/// `dI(a, z)/dz = (I(a-1, z) + I(a+1, z)) / 2`.
pub fn bessel_i_derivative(order: ComplexValue, z: ComplexValue, ctl: &SeriesControl) -> Result<ComplexValue> {
    Ok((bessel_i(order - 1.0, z, ctl)? + bessel_i(order + 1.0, z, ctl)?) * 0.5)
}
