//! Joint generating functions `F_A(x, y, t) = E[x^Z_A y^Z_B | one A-cell]`
//! and `F_B(y, t) = E[y^Z_B | one B-cell]`.
//!
//! `F_B` is elementary. `F_A` has a closed form in each criticality regime:
//! modified Bessel functions when both types are critical, Whittaker
//! functions when only B is critical, and Gauss hypergeometric functions
//! when B is non-critical. The integration constant is fixed per call from
//! the initial condition `F_A(x, y, 0) = x`.

mod bessel_form;
pub(crate) mod gauss_form;
mod whittaker_form;

use serde::Serialize;

use crate::model::{classify, progeny_pgf_a};
use crate::oracle::{integrate_backward, StepControl};
use crate::specfun::SeriesControl;
use crate::{ComplexValue, Error, ModelParams, Result, TheoremBranch};

/// `|1 - y|` at or below which the transforms are treated as singular.
pub const EPS_Y: f64 = 1e-8;

/// Allowed imaginary residue, relative to `max(1, |re|)`, when casting to real.
pub const IMAG_GUARD: f64 = 1e-8;

/// Distance to a degenerate constant below which the closed form is refused.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Largest tolerated error amplification in the closed forms.
///
/// Near `y = 1` the two independent solutions nearly cancel and the closed
/// forms lose digits roughly like `exp(2 mu / sqrt(1 - y))`; beyond this
/// limit the value is refused and `Auto` uses the oracle.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// `(|a| + |b|) / |a + b|`
pub(crate) fn cancellation(a: ComplexValue, b: ComplexValue) -> f64 {
    (a.norm() + b.norm()) / (a + b).norm()
}

/// `a + c b`, where `c` carries relative error amplification `c_condition`;
/// refused when the sum amplifies rounding beyond [`CANCELLATION_LIMIT`].
pub(crate) fn guarded_combination(
    a: ComplexValue,
    c: ComplexValue,
    b: ComplexValue,
    c_condition: f64,
    what: &'static str,
) -> Result<ComplexValue> {
    let s = a + c * b;
    let amplification = (a.norm() + c_condition * (c * b).norm()) / s.norm();
    // NaN counts as unbounded
    if amplification.is_nan() || amplification > CANCELLATION_LIMIT {
        return Err(Error::Convergence {
            function: what,
            reason: format!("cancellation amplifies rounding by {amplification:e}"),
        });
    }
    Ok(s)
}

/// Constants of the closed form at a given `(x, y)`.
///
/// `mu` is `4 lambda_a / lambda_b` when B is critical and
/// `lambda_a / (lambda_b (p - q))` otherwise. Only the thetas used by the
/// active regime are set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeConstants {
    pub mu: ComplexValue,
    pub theta: Option<ComplexValue>,
    pub theta1: Option<ComplexValue>,
    pub theta2: Option<ComplexValue>,
    pub theta3: Option<ComplexValue>,
    pub c_const: ComplexValue,
    /// Error amplification incurred when `c_const` was formed.
    pub c_condition: f64,
    pub kappa: ComplexValue,
}

/// Time-dependent arguments of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformState {
    pub w: ComplexValue,
    pub z: ComplexValue,
    /// `(p^2 - y q^2) / (1 - y)`, the value of `z` at `t = 0`.
    pub p_big: ComplexValue,
}

impl TransformState {
    pub fn new(y: ComplexValue, t: f64, params: &ModelParams) -> Result<Self> {
        Ok(Self {
            w: transform_w(y, t, params)?,
            z: transform_z(y, t, params)?,
            p_big: p_big(y, params)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    ClosedForm,
    Oracle,
    /// Closed form where it is defined, otherwise the RK4 oracle.
    Auto,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Oracle => "ode",
            Method::Auto => "auto",
        }
    }
}

/// A PGF value together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct PgfValue {
    pub value: ComplexValue,
    /// `ClosedForm` or `Oracle`; never `Auto`.
    pub method_used: Method,
    /// Why `Auto` abandoned the closed form, if it did.
    pub fallback_reason: Option<String>,
}

fn one_minus_y(y: ComplexValue) -> Result<ComplexValue> {
    let d = 1.0 - y;
    if d.norm() <= EPS_Y {
        return Err(Error::SingularTransform { distance: d.norm() });
    }
    Ok(d)
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be finite and >= 0")))
    }
}

fn p_big(y: ComplexValue, params: &ModelParams) -> Result<ComplexValue> {
    let (p, q) = (params.p(), params.q());
    Ok((p * p - y * (q * q)) / one_minus_y(y)?)
}

/// `w = (lambda_b t (1 - y) / 4 + 1) / (1 - y)`.
pub fn transform_w(y: ComplexValue, t: f64, params: &ModelParams) -> Result<ComplexValue> {
    let d = one_minus_y(y)?;
    Ok((d * (params.lambda_b() * t / 4.0) + 1.0) / d)
}

/// `z = (p^2 - y q^2) / (1 - y) * exp(lambda_b (p - q) t)`.
pub fn transform_z(y: ComplexValue, t: f64, params: &ModelParams) -> Result<ComplexValue> {
    Ok(p_big(y, params)? * (params.lambda_b() * (params.p() - params.q()) * t).exp())
}

/// `F_B(y, t)`.
///
/// Written as `(z - p^2) / (z - q^2)` multiplied through by `1 - y`, so it
/// stays finite at `y = 1`. The denominator only vanishes at a real `y > 1`.
pub fn pgf_b(y: ComplexValue, t: f64, params: &ModelParams) -> Result<ComplexValue> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(y);
    }
    let (p, q, lb) = (params.p(), params.q(), params.lambda_b());
    let one_y = 1.0 - y;
    if p == 0.5 {
        let s = one_y * (lb * t / 2.0);
        return Ok((s + y * 2.0) / (s + 2.0));
    }
    let e = (lb * (p - q) * t).exp();
    let lead = (p * p - y * (q * q)) * e;
    Ok((lead - one_y * (p * p)) / (lead - one_y * (q * q)))
}

fn check_unit_disk(x: ComplexValue, y: ComplexValue) -> Result<()> {
    const SLACK: f64 = 1e-12;
    if !(x.norm() <= 1.0 + SLACK && y.norm() <= 1.0 + SLACK) {
        return Err(Error::InvalidParameter(format!(
            "x = {x}, y = {y} must lie in the closed unit disk"
        )));
    }
    Ok(())
}

/// Closed-form constants for the branch that `params` falls in.
pub fn regime_constants(x: ComplexValue, y: ComplexValue, params: &ModelParams) -> Result<RegimeConstants> {
    let ctl = SeriesControl::default();
    match classify(params).theorem_branch {
        TheoremBranch::BiCritical => bessel_form::constants(x, y, params, &ctl),
        TheoremBranch::NonCritACritB => whittaker_form::constants(x, y, params, &ctl),
        TheoremBranch::NonCritB => gauss_form::constants(x, y, params, &ctl),
        TheoremBranch::OracleOnly => Err(Error::UnsupportedRegime(format!(
            "no closed form at the parameter corner {params}"
        ))),
    }
}

fn closed_form(x: ComplexValue, y: ComplexValue, t: f64, params: &ModelParams) -> Result<ComplexValue> {
    let ctl = SeriesControl::default();
    let value = match classify(params).theorem_branch {
        TheoremBranch::BiCritical => bessel_form::evaluate(x, y, t, params, &ctl)?,
        TheoremBranch::NonCritACritB => whittaker_form::evaluate(x, y, t, params, &ctl)?,
        TheoremBranch::NonCritB => gauss_form::evaluate(x, y, t, params, &ctl)?,
        TheoremBranch::OracleOnly => {
            return Err(Error::UnsupportedRegime(format!(
                "no closed form at the parameter corner {params}"
            )))
        }
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::InternalConsistency(format!("closed form returned {value}")));
    }
    if x.im == 0.0 && y.im == 0.0 && value.im.abs() >= IMAG_GUARD * value.re.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!(
            "closed form returned {value} for real arguments"
        )));
    }
    Ok(value)
}

fn oracle(x: ComplexValue, y: ComplexValue, t: f64, params: &ModelParams) -> Result<ComplexValue> {
    Ok(integrate_backward(x, y, t, params, &StepControl::default())?.0)
}

/// `F_A(x, y, t)` with provenance.
pub fn evaluate(x: ComplexValue, y: ComplexValue, t: f64, params: &ModelParams, method: Method) -> Result<PgfValue> {
    check_time(t)?;
    check_unit_disk(x, y)?;
    let done = |value, method_used, fallback_reason| PgfValue {
        value,
        method_used,
        fallback_reason,
    };
    match method {
        Method::ClosedForm => Ok(done(closed_form(x, y, t, params)?, Method::ClosedForm, None)),
        Method::Oracle => Ok(done(oracle(x, y, t, params)?, Method::Oracle, None)),
        Method::Auto => {
            if t == 0.0 {
                return Ok(done(x, Method::ClosedForm, None));
            }
            match closed_form(x, y, t, params) {
                Ok(v) => Ok(done(v, Method::ClosedForm, None)),
                Err(e) => Ok(done(oracle(x, y, t, params)?, Method::Oracle, Some(e.to_string()))),
            }
        }
    }
}

/// `F_A(x, y, t)`.
pub fn pgf_a(x: ComplexValue, y: ComplexValue, t: f64, params: &ModelParams, method: Method) -> Result<ComplexValue> {
    Ok(evaluate(x, y, t, params, method)?.value)
}

/// `F_A(x, y, t)` for real `x, y` in `[0, 1]`.
pub fn pgf_a_real(x: f64, y: f64, t: f64, params: &ModelParams, method: Method) -> Result<f64> {
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(Error::InvalidParameter(format!("x = {x}, y = {y} must lie in [0, 1]")));
    }
    let v = pgf_a(ComplexValue::new(x, 0.0), ComplexValue::new(y, 0.0), t, params, method)?;
    if v.im.abs() >= IMAG_GUARD * v.re.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!("PGF value {v} is not real")));
    }
    Ok(v.re)
}

/// `|dF_A/dt - lambda_a (h_A(F_A, F_B) - F_A)|` at `t`, with the time
/// derivative from central differences of `F_A` evaluated by `method`
/// (one-sided near `t = 0`).
pub fn backward_residual(
    x: ComplexValue,
    y: ComplexValue,
    t: f64,
    params: &ModelParams,
    method: Method,
) -> Result<f64> {
    let h = 1e-5 * t.max(1.0);
    let f = |s| pgf_a(x, y, s, params, method);
    let deriv = if t >= h {
        (f(t + h)? - f(t - h)?) / (2.0 * h)
    } else {
        (f(t + 2.0 * h)? * -1.0 + f(t + h)? * 4.0 - f(t)? * 3.0) / (2.0 * h)
    };
    let fa = f(t)?;
    let fb = pgf_b(y, t, params)?;
    Ok((deriv - (progeny_pgf_a(fa, fb, params) - fa) * params.lambda_a()).norm())
}

/// Nearest-integer distance of a value that should be real.
pub(crate) fn integer_distance(v: ComplexValue) -> f64 {
    if v.im.abs() > DEGENERACY_TOL {
        return f64::INFINITY;
    }
    (v.re - v.re.round()).abs()
}

#[cfg(test)]
mod tests;
