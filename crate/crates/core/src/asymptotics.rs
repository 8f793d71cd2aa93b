//! Long-time behaviour of the extinction probability `E(t) = F_A(0, 0, t)`.
//!
//! Convention: `E(t) ~ limit - rate_coefficient * g(t)` with
//! `g(t) = t^{-1/2}`, `t^{-1}` or `exp(exponent * t)` by [`RateClass`].

use serde::Serialize;

use crate::model::{classify, Criticality};
use crate::oracle::estimate_extinction;
use crate::pgf::{gauss_form, pgf_a_real, Method, DEGENERACY_TOL};
use crate::{ComplexValue, Error, ModelParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RateClass {
    InverseSqrtT,
    InverseT,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtinctionResult {
    pub limit: f64,
    pub rate_class: RateClass,
    pub rate_coefficient: f64,
    /// Decay exponent (negative) for [`RateClass::Exponential`].
    pub exponent: Option<f64>,
}

impl ExtinctionResult {
    /// `limit - rate_coefficient * g(t)`, clamped to `[0, 1]`.
    pub fn approximate(&self, t: f64) -> f64 {
        let g = match self.rate_class {
            RateClass::InverseSqrtT => 1.0 / t.sqrt(),
            RateClass::InverseT => 1.0 / t,
            RateClass::Exponential => (self.exponent.unwrap_or(0.0) * t).exp(),
        };
        (self.limit - self.rate_coefficient * g).clamp(0.0, 1.0)
    }
}

/// Imaginary parts tolerated when a real constant is built from complex pieces.
const REAL_GUARD: f64 = 1e-8;

/// `alpha` closer than this to 1 makes the super-critical-B limit formula
/// lose all precision to cancellation.
const ALPHA_ONE_MARGIN: f64 = 1e-6;

/// Smallest root in `[0, 1]^2` of `s_B = (p + q s_B)^2`,
/// `s_A = ((1 - alpha) s_A + alpha s_B)^2`; returns `s_A`.
pub fn extinction_fixed_point(params: &ModelParams) -> f64 {
    let (alpha, p, q) = (params.alpha(), params.p(), params.q());
    let s_b = if p >= q { 1.0 } else { (p * p) / (q * q) };
    let ab = alpha * (1.0 - alpha) * s_b;
    // Rationalised smaller quadratic root, stable as alpha -> 1.
    2.0 * alpha * alpha * s_b * s_b / (1.0 - 2.0 * ab + (1.0 - 4.0 * ab).max(0.0).sqrt())
}

fn real(v: ComplexValue, what: &str) -> Result<f64> {
    if v.im.abs() > REAL_GUARD * v.re.abs().max(1.0) || !v.re.is_finite() {
        return Err(Error::InternalConsistency(format!("{what} = {v} is not a finite real")));
    }
    Ok(v.re)
}

/// Limit of `E(t)` and the leading correction.
pub fn extinction_limit(params: &ModelParams) -> Result<ExtinctionResult> {
    let regime = classify(params);
    let (alpha, p, q, lb) = (params.alpha(), params.p(), params.q(), params.lambda_b());
    match (regime.a_class, regime.b_class) {
        (Criticality::Critical, Criticality::Critical) => Ok(ExtinctionResult {
            limit: 1.0,
            rate_class: RateClass::InverseSqrtT,
            rate_coefficient: 4.0 / lb.sqrt(),
            exponent: None,
        }),
        (_, Criticality::Critical) => {
            let (limit, rate_coefficient) = if alpha < 0.5 {
                (
                    (alpha / (1.0 - alpha)).powi(2),
                    8.0 * alpha * alpha / ((1.0 - alpha) * (1.0 - 2.0 * alpha) * lb),
                )
            } else {
                (1.0, 8.0 * alpha / ((2.0 * alpha - 1.0) * lb))
            };
            Ok(ExtinctionResult {
                limit,
                rate_class: RateClass::InverseT,
                rate_coefficient,
                exponent: None,
            })
        }
        (_, Criticality::SubCritical) => Err(Error::UnsupportedRegime(format!(
            "no long-time expansion for sub-critical B with non-critical dynamics ({params})"
        ))),
        (_, Criticality::SuperCritical) => super_critical_b(params, alpha, p, q, lb),
    }
}

fn super_critical_b(params: &ModelParams, alpha: f64, p: f64, q: f64, lb: f64) -> Result<ExtinctionResult> {
    if alpha > 1.0 - ALPHA_ONE_MARGIN {
        return Err(Error::DegenerateParameter(format!(
            "alpha = {alpha} too close to 1 for the limit formula"
        )));
    }
    let ab = alpha * (1.0 - alpha);
    let limit =
        (1.0 - 2.0 * ab * p * p / (q * q) - (q * q - 4.0 * ab * p * p).sqrt() / q) / (2.0 * (1.0 - alpha).powi(2));
    let k = gauss_form::consts(params)?;
    let theta1 = real(k.theta1, "theta1")?;
    if (theta1 + 1.0).abs() < DEGENERACY_TOL {
        return Err(Error::DegenerateParameter(format!("theta1 = {theta1} equals -1")));
    }
    let mu = k.mu;
    let scale = mu * (1.0 - alpha).powi(2);
    let (rate_coefficient, exponent) = if theta1 > -1.0 {
        // The slowest correction comes from the second solution; its weight
        // is the integration constant of E itself.
        let c0 =
            crate::pgf::regime_constants(ComplexValue::new(0.0, 0.0), ComplexValue::new(0.0, 0.0), params)?.c_const;
        let coef = -c0 * theta1 * p.powf(-2.0 * theta1) / scale;
        (real(coef, "rate coefficient")?, -lb * (p - q) * theta1)
    } else {
        // The correction linear in z dominates.
        // theta2 may be imaginary; its parts cancel between the first two terms.
        let bracket = k.k(1.0) - (1.0 + k.theta2) / (2.0 * q * q) - mu * ab * (q * q - p * p) / q.powi(4);
        (real(bracket * (p * p / scale), "rate coefficient")?, lb * (p - q))
    };
    Ok(ExtinctionResult {
        limit,
        rate_class: RateClass::Exponential,
        rate_coefficient,
        exponent: Some(exponent),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    /// Closed form where available, RK4 otherwise.
    Exact,
    /// Limit minus leading correction.
    Asymptotic,
    MonteCarlo {
        replicates: usize,
        seed: u64,
    },
    Ode,
}

impl CurveMethod {
    pub fn label(&self) -> &'static str {
        match self {
            CurveMethod::Exact => "exact",
            CurveMethod::Asymptotic => "asymptotic",
            CurveMethod::MonteCarlo { .. } => "mc",
            CurveMethod::Ode => "ode",
        }
    }
}

/// `(t, E(t))` for sorted non-negative `times`.
pub fn extinction_curve(params: &ModelParams, times: &[f64], method: CurveMethod) -> Result<Vec<(f64, f64)>> {
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter("times must be finite and >= 0".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be sorted".into()));
    }
    let limit = match method {
        CurveMethod::Asymptotic => Some(extinction_limit(params)?),
        _ => None,
    };
    times
        .iter()
        .map(|&t| {
            let e = match method {
                CurveMethod::Exact => pgf_a_real(0.0, 0.0, t, params, Method::Auto)?,
                CurveMethod::Ode => pgf_a_real(0.0, 0.0, t, params, Method::Oracle)?,
                CurveMethod::Asymptotic => limit.as_ref().map_or(0.0, |l| l.approximate(t)),
                CurveMethod::MonteCarlo { replicates, seed } => estimate_extinction(params, t, replicates, seed)?.value,
            };
            Ok((t, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params(alpha: f64, p: f64, la: f64, lb: f64) -> ModelParams {
        ModelParams::new(alpha, p, la, lb).unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(extinction_fixed_point(&params(0.5, 0.5, 1.0, 1.0)), 1.0);
        let s = extinction_fixed_point(&params(1.0, 0.3, 1.0, 1.0));
        assert_abs_diff_eq!(s, (9.0f64 / 49.0).powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(s, 0.033736, epsilon = 1e-6);
        assert_eq!(extinction_fixed_point(&params(0.0, 0.2, 1.0, 1.0)), 0.0);
        assert_eq!(extinction_fixed_point(&params(0.8, 0.7, 1.0, 1.0)), 1.0);
    }

    #[test]
    fn limit_examples() {
        let r = extinction_limit(&params(0.5, 0.5, 1.0, 4.0)).unwrap();
        assert_eq!(
            (r.limit, r.rate_class, r.rate_coefficient),
            (1.0, RateClass::InverseSqrtT, 2.0)
        );
        let r = extinction_limit(&params(0.25, 0.5, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.limit, 1.0 / 9.0, epsilon = 1e-15);
        assert_eq!(r.rate_class, RateClass::InverseT);
        let r = extinction_limit(&params(0.5, 0.3, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r.limit, 0.009310, epsilon = 1e-6);
        assert_eq!(r.rate_class, RateClass::Exponential);
        assert!(matches!(
            extinction_limit(&params(0.3, 0.7, 1.0, 1.0)),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            extinction_limit(&params(1.0, 0.3, 1.0, 1.0)),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn near_one_alpha_is_continuous() {
        let (p, q) = (0.3f64, 0.7f64);
        let r = extinction_limit(&params(0.999, p, 1.0, 1.0)).unwrap();
        assert!((r.limit - (p / q).powi(4)).abs() < 1e-2);
    }

    proptest! {
        #[test]
        fn limit_matches_fixed_point(alpha in 0.01f64..0.99, p in 0.05f64..0.49, la in 0.1f64..3.0, lb in 0.1f64..3.0) {
            for m in [params(alpha, p, la, lb), params(alpha, 0.5, la, lb), params(0.5, 0.5, la, lb)] {
                if let Ok(r) = extinction_limit(&m) {
                    prop_assert!((r.limit - extinction_fixed_point(&m)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn curve_examples() {
        let m = params(0.5, 0.5, 1.0, 4.0);
        let c = extinction_curve(&m, &[400.0], CurveMethod::Asymptotic).unwrap();
        assert_abs_diff_eq!(c[0].1, 0.9, epsilon = 1e-15);
        for m in [params(0.5, 0.5, 1.0, 1.0), params(0.2, 0.3, 1.0, 2.0)] {
            assert_eq!(extinction_curve(&m, &[0.0], CurveMethod::Exact).unwrap()[0].1, 0.0);
        }
        let m = params(0.25, 0.5, 1.0, 1.0);
        let c = extinction_curve(&m, &[200.0], CurveMethod::Exact).unwrap();
        assert!((c[0].1 - 1.0 / 9.0).abs() < 1e-2);
        assert!(extinction_curve(&m, &[2.0, 1.0], CurveMethod::Exact).is_err());
    }

    #[test]
    fn exact_curve_is_monotone_and_bounded() {
        let times: Vec<f64> = (0..=12).map(|i| i as f64 * 0.75).collect();
        for m in [
            params(0.5, 0.5, 1.0, 1.0),
            params(0.25, 0.5, 1.0, 1.0),
            params(0.5, 0.3, 1.0, 1.0),
            params(0.4, 0.6, 1.0, 1.0),
        ] {
            let bound = extinction_fixed_point(&m) + 1e-9;
            let curve = extinction_curve(&m, &times, CurveMethod::Exact).unwrap();
            for w in curve.windows(2) {
                assert!(w[1].1 >= w[0].1 - 1e-12);
            }
            assert!(curve.iter().all(|(_, e)| *e <= bound));
        }
    }

    #[test]
    fn inverse_sqrt_rate() {
        let m = params(0.5, 0.5, 1.0, 1.0);
        let times = [1e2, 1e3, 1e4];
        let curve = extinction_curve(&m, &times, CurveMethod::Exact).unwrap();
        let dev: Vec<f64> = curve
            .iter()
            .map(|(t, e)| ((1.0 - e) * t.sqrt() / 4.0 - 1.0).abs())
            .collect();
        assert!(dev[0] > dev[1] && dev[1] > dev[2] && dev[2] < 0.05, "{dev:?}");
    }

    #[test]
    fn inverse_t_rate() {
        for alpha in [0.25, 0.7] {
            let m = params(alpha, 0.5, 1.0, 1.0);
            let r = extinction_limit(&m).unwrap();
            let e = extinction_curve(&m, &[1e3], CurveMethod::Exact).unwrap()[0].1;
            let ratio = (r.limit - e) * 1e3 / r.rate_coefficient;
            assert!((ratio - 1.0).abs() < 0.1, "alpha={alpha}: {ratio}");
        }
    }

    #[test]
    fn exponential_rate_small_theta1() {
        let m = params(0.5, 0.1, 0.1, 1.0);
        let r = extinction_limit(&m).unwrap();
        let exponent = r.exponent.unwrap();
        let k = gauss_form::consts(&m).unwrap();
        assert!(k.theta1.re > -1.0 && k.theta1.re < 0.0);
        assert_abs_diff_eq!(exponent, 0.8 * k.theta1.re, epsilon = 1e-15);
        let times = [5.0, 10.0, 15.0, 20.0];
        let curve = extinction_curve(&m, &times, CurveMethod::Exact).unwrap();
        let logs: Vec<f64> = curve.iter().map(|(_, e)| (r.limit - e).abs().ln()).collect();
        let slope = (logs[3] - logs[0]) / 15.0;
        assert!((slope / exponent - 1.0).abs() < 0.05, "{slope} vs {exponent}");
        let ratio = (r.limit - curve[3].1) / (r.rate_coefficient * (exponent * 20.0).exp());
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn exponential_rate_large_theta1() {
        let m = params(0.5, 0.3, 1.0, 1.0);
        let r = extinction_limit(&m).unwrap();
        assert_abs_diff_eq!(r.exponent.unwrap(), -0.4, epsilon = 1e-15);
        let e = extinction_curve(&m, &[30.0], CurveMethod::Exact).unwrap()[0].1;
        let ratio = (r.limit - e) / (r.rate_coefficient * (-0.4f64 * 30.0).exp());
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }
}
