//! Non-critical A, critical B. `F_A` is a ratio of Whittaker functions
//! `M` and `W` at `theta w` with `theta = |1 - 2 alpha| mu`.

use super::{cancellation, guarded_combination, integer_distance, transform_w, RegimeConstants, DEGENERACY_TOL};
use crate::specfun::{whittaker_m, whittaker_w, SeriesControl};
use crate::{ComplexValue, Error, ModelParams, Result};

struct Consts {
    mu: f64,
    theta: f64,
    theta1: f64,
    theta2: ComplexValue,
}

fn consts(params: &ModelParams) -> Result<Consts> {
    let alpha = params.alpha();
    let mu = 4.0 * params.lambda_a() / params.lambda_b();
    let gap = (1.0 - 2.0 * alpha).abs();
    let theta2 = ComplexValue::new(1.0 - 4.0 * mu * alpha + 4.0 * mu * alpha * alpha, 0.0).sqrt() / 2.0;
    // W is built from the Tricomi connection formula, which needs 1 + 2 theta2
    // away from the integers.
    if integer_distance(theta2 * 2.0) < DEGENERACY_TOL {
        return Err(Error::DegenerateParameter(format!(
            "2 theta2 = {} is an integer",
            theta2 * 2.0
        )));
    }
    Ok(Consts {
        mu,
        theta: gap * mu,
        theta1: -mu * alpha * (1.0 - alpha) / gap,
        theta2,
    })
}

struct Parts {
    m0: ComplexValue,
    m1: ComplexValue,
    w0: ComplexValue,
    w1: ComplexValue,
}

impl Parts {
    fn at(w: ComplexValue, k: &Consts, ctl: &SeriesControl) -> Result<Self> {
        let arg = w * k.theta;
        let a0 = ComplexValue::from(k.theta1);
        let a1 = a0 + 1.0;
        Ok(Self {
            m0: whittaker_m(a0, k.theta2, arg, ctl)?,
            m1: whittaker_m(a1, k.theta2, arg, ctl)?,
            w0: whittaker_w(a0, k.theta2, arg, ctl)?,
            w1: whittaker_w(a1, k.theta2, arg, ctl)?,
        })
    }
}

pub(super) fn constants(
    x: ComplexValue,
    y: ComplexValue,
    params: &ModelParams,
    ctl: &SeriesControl,
) -> Result<RegimeConstants> {
    let k = consts(params)?;
    let alpha = params.alpha();
    let (mu, th1) = (k.mu, k.theta1);
    let one_y = 1.0 - y;
    let kappa = (-mu * (1.0 - alpha).powi(2) * x + mu * (1.0 - 2.0 * alpha * (1.0 - alpha) * y) / 2.0 - k.theta / 2.0
        + th1 * one_y)
        / one_y;
    let at0 = Parts::at(transform_w(y, 0.0, params)?, &k, ctl)?;
    let lead = 0.5 + th1 + k.theta2;
    let (num, den) = ((lead * at0.m1, -kappa * at0.m0), (kappa * at0.w0, at0.w1));
    let c_const = (num.0 + num.1) / (den.0 + den.1);
    let c_condition = cancellation(num.0, num.1) + cancellation(den.0, den.1);
    Ok(RegimeConstants {
        mu: mu.into(),
        theta: Some(k.theta.into()),
        theta1: Some(th1.into()),
        theta2: Some(k.theta2),
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
    let rc = constants(x, y, params, ctl)?;
    let (c, cc) = (rc.c_const, rc.c_condition);
    let k = consts(params)?;
    let alpha = params.alpha();
    let mu = k.mu;
    let w = transform_w(y, t, params)?;
    let at = Parts::at(w, &k, ctl)?;
    let lead = 0.5 + k.theta1 + k.theta2;
    let ratio = guarded_combination(lead * at.m1, -c, at.w1, cc, "whittaker_form")?
        / (w * guarded_combination(at.m0, c, at.w0, cc, "whittaker_form")?);
    let tail = mu * (w + 2.0 * alpha * (1.0 - alpha) * (1.0 - w)) / (w * 2.0);
    Ok(-(k.theta / 2.0 - k.theta1 / w + ratio - tail) / (mu * (1.0 - alpha).powi(2)))
}
