//! Both types critical. With `mu = 4 lambda_a / lambda_b` and
//! `theta = sqrt(1 - mu)`, `F_A` is a ratio of modified Bessel functions of
//! orders `±theta` and `1 ± theta` at `mu sqrt(w)`.

use super::{cancellation, guarded_combination, transform_w, RegimeConstants, DEGENERACY_TOL};
use crate::specfun::{bessel_i, SeriesControl};
use crate::{ComplexValue, Error, ModelParams, Result};

struct Parts {
    i0m: ComplexValue,
    i0p: ComplexValue,
    i1m: ComplexValue,
    i1p: ComplexValue,
    /// `theta / (mu sqrt(w))`
    ratio: ComplexValue,
}

impl Parts {
    fn at(w: ComplexValue, mu: f64, theta: ComplexValue, ctl: &SeriesControl) -> Result<Self> {
        let sw = w.sqrt();
        let arg = sw * mu;
        Ok(Self {
            i0m: bessel_i(-theta, arg, ctl)?,
            i0p: bessel_i(theta, arg, ctl)?,
            i1m: bessel_i(1.0 - theta, arg, ctl)?,
            i1p: bessel_i(1.0 + theta, arg, ctl)?,
            ratio: theta / arg,
        })
    }

    /// Numerator terms attached to the `-theta` and `+theta` solutions.
    fn minus(&self) -> ComplexValue {
        -self.ratio * self.i0m + self.i1m
    }

    fn plus(&self) -> ComplexValue {
        self.ratio * self.i0p + self.i1p
    }
}

fn mu_theta(params: &ModelParams) -> Result<(f64, ComplexValue)> {
    let mu = 4.0 * params.lambda_a() / params.lambda_b();
    let theta = ComplexValue::new(1.0 - mu, 0.0).sqrt();
    if theta.norm() < DEGENERACY_TOL {
        return Err(Error::DegenerateParameter(format!(
            "theta = {theta}: the two Bessel solutions coincide at mu = 1"
        )));
    }
    Ok((mu, theta))
}

pub(super) fn constants(
    x: ComplexValue,
    y: ComplexValue,
    params: &ModelParams,
    ctl: &SeriesControl,
) -> Result<RegimeConstants> {
    let (mu, theta) = mu_theta(params)?;
    let w0 = transform_w(y, 0.0, params)?;
    let s1 = (1.0 - y).sqrt();
    let kappa = (2.0 - y - x) / (s1 * 2.0) - s1 / mu;
    let at0 = Parts::at(w0, mu, theta, ctl)?;
    let (num, den) = ((kappa * at0.i0m, -at0.minus()), (at0.plus(), -kappa * at0.i0p));
    let c_const = (num.0 + num.1) / (den.0 + den.1);
    let c_condition = cancellation(num.0, num.1) + cancellation(den.0, den.1);
    Ok(RegimeConstants {
        mu: mu.into(),
        theta: Some(theta),
        theta1: None,
        theta2: None,
        theta3: None,
        c_const,
        c_condition,
        kappa,
    })
}

pub(super) fn evaluate(
    x: ComplexValue,
    y: ComplexValue,
    t: f64,
    params: &ModelParams,
    ctl: &SeriesControl,
) -> Result<ComplexValue> {
    let k = constants(x, y, params, ctl)?;
    let (mu, theta) = mu_theta(params)?;
    let (c, cc) = (k.c_const, k.c_condition);
    let w = transform_w(y, t, params)?;
    let at = Parts::at(w, mu, theta, ctl)?;
    let num = guarded_combination(at.minus(), c, at.plus(), cc, "bessel_form")?;
    let den = guarded_combination(at.i0m, c, at.i0p, cc, "bessel_form")?;
    let sw = w.sqrt();
    Ok(-4.0 / mu * (mu / (sw * 2.0) * num / den + 1.0 / (w * 2.0) - mu * (1.0 + w) / (w * 4.0)))
}
