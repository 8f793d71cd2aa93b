//! Non-critical B. With `z = P e^{lambda_b (p - q) t}`, `F_A` is a ratio of
//! Gauss hypergeometric functions at `z / q^2`.
//!
//! The power series only converges inside the unit disk, so the closed form
//! is available only when both `P / q^2` and `z / q^2` lie inside it. For
//! sub-critical B that never happens on real `y` in `[0, 1)`.

use super::{cancellation, guarded_combination, integer_distance, p_big, transform_z, RegimeConstants, DEGENERACY_TOL};
use crate::specfun::{cpow, gauss_2f1, SeriesControl};
use crate::{ComplexValue, Error, ModelParams, Result};

pub(crate) struct Consts {
    pub mu: f64,
    pub theta1: ComplexValue,
    pub theta2: ComplexValue,
    pub theta3: f64,
    q2: f64,
}

pub(crate) fn consts(params: &ModelParams) -> Result<Consts> {
    let (alpha, p, q) = (params.alpha(), params.p(), params.q());
    let ab = alpha * (1.0 - alpha);
    let mu = params.lambda_a() / (params.lambda_b() * (p - q));
    let theta1 = mu * ComplexValue::new(q * q - 4.0 * ab * p * p, 0.0).sqrt() / q;
    let theta2 = ComplexValue::new(q * q - 4.0 * ab * mu * (p - q), 0.0).sqrt() / q;
    if integer_distance(theta1) < DEGENERACY_TOL {
        return Err(Error::DegenerateParameter(format!(
            "theta1 = {theta1} is an integer: the hypergeometric solutions coincide"
        )));
    }
    Ok(Consts {
        mu,
        theta1,
        theta2,
        theta3: mu * (1.0 - 2.0 * alpha).abs(),
        q2: q * q,
    })
}

/// Numerator and denominator pieces of the two independent solutions.
pub(crate) struct Parts {
    pub n_plus: ComplexValue,
    pub n_minus: ComplexValue,
    pub d_plus: ComplexValue,
    pub d_minus: ComplexValue,
}

impl Consts {
    /// `k_± = ((1 ± theta1 + theta2)^2 - theta3^2) / (4 q^2 (1 ± theta1))`
    pub(crate) fn k(&self, sign: f64) -> ComplexValue {
        let s = 1.0 + sign * self.theta1;
        ((s + self.theta2).powi(2) - self.theta3 * self.theta3) / (4.0 * self.q2 * s)
    }

    fn solution(&self, z: ComplexValue, sign: f64, ctl: &SeriesControl) -> Result<(ComplexValue, ComplexValue)> {
        let s = 1.0 + sign * self.theta1;
        let a = (s + self.theta2 + self.theta3) / 2.0;
        let b = (s + self.theta2 - self.theta3) / 2.0;
        let u = z / self.q2;
        let f0 = gauss_2f1(a, b, s, u, ctl)?;
        let f1 = gauss_2f1(a + 1.0, b + 1.0, s + 1.0, u, ctl)?;
        let d = cpow(z, s / 2.0) * f0;
        let n = s / 2.0 * cpow(z, -(2.0 - s) / 2.0) * f0 + self.k(sign) * cpow(z, s / 2.0) * f1;
        Ok((n, d))
    }

    pub(crate) fn parts(&self, z: ComplexValue, ctl: &SeriesControl) -> Result<Parts> {
        let (n_plus, d_plus) = self.solution(z, 1.0, ctl)?;
        let (n_minus, d_minus) = self.solution(z, -1.0, ctl)?;
        Ok(Parts {
            n_plus,
            n_minus,
            d_plus,
            d_minus,
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
    let (alpha, p, q) = (params.alpha(), params.p(), params.q());
    let mu = k.mu;
    let z0 = p_big(y, params)?;
    let kappa = (-mu * (1.0 - alpha).powi(2) * x + 0.5 - mu * (2.0 * alpha * (1.0 - alpha) * y - 1.0) / 2.0) / z0
        - (1.0 + k.theta2) * (1.0 - y) / (2.0 * (p - q));
    let at0 = k.parts(z0, ctl)?;
    let (num, den) = ((kappa * at0.d_plus, -at0.n_plus), (at0.n_minus, -kappa * at0.d_minus));
    let c_const = (num.0 + num.1) / (den.0 + den.1);
    let c_condition = cancellation(num.0, num.1) + cancellation(den.0, den.1);
    Ok(RegimeConstants {
        mu: mu.into(),
        theta: None,
        theta1: Some(k.theta1),
        theta2: Some(k.theta2),
        theta3: Some(k.theta3.into()),
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
    let (alpha, p) = (params.alpha(), params.p());
    let mu = k.mu;
    let z = transform_z(y, t, params)?;
    let at = k.parts(z, ctl)?;
    let r = guarded_combination(at.n_plus, c, at.n_minus, cc, "gauss_form")?
        / guarded_combination(at.d_plus, c, at.d_minus, cc, "gauss_form")?;
    let zq = z - k.q2;
    let inner = (1.0 / z - mu / z * (2.0 * alpha * (1.0 - alpha) * (z - p * p) / zq - 1.0)) / 2.0;
    Ok(-z / (mu * (1.0 - alpha).powi(2)) * (r + (1.0 + k.theta2) / (2.0 * zq) - inner))
}
