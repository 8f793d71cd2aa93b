//! Self-check suite: recurrences, derivative formulas, large-argument
//! behaviour and symmetries of the special functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    bessel_i, bessel_i_derivative, gamma, gauss_2f1, gauss_2f1_derivative, kummer_m, tricomi_u, whittaker_m,
    whittaker_m_derivative, whittaker_w, whittaker_w_derivative, SeriesControl,
};
use crate::{ComplexValue, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub function: &'static str,
    pub identity: &'static str,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
}

const FD_STEP: f64 = 1e-3;
const SAMPLES: usize = 200;
const SEED: u64 = 20_240_611;

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn r(x: f64) -> ComplexValue {
    c(x, 0.0)
}

fn rel(got: ComplexValue, want: ComplexValue) -> f64 {
    (got - want).norm() / want.norm().max(f64::MIN_POSITIVE)
}

/// Folds per-point errors into one check; an evaluation error counts as a failure.
fn check<I>(function: &'static str, identity: &'static str, tolerance: f64, errors: I) -> IdentityCheck
where
    I: IntoIterator<Item = Result<f64>>,
{
    let mut max_rel_err = 0.0f64;
    let mut ok = true;
    for e in errors {
        match e {
            Ok(e) if e.is_finite() => max_rel_err = max_rel_err.max(e),
            _ => ok = false,
        }
    }
    if !ok {
        max_rel_err = f64::INFINITY;
    }
    IdentityCheck {
        function,
        identity,
        max_rel_err,
        tolerance,
        passed: ok && max_rel_err <= tolerance,
    }
}

fn central_difference<F>(f: F, z: ComplexValue) -> Result<ComplexValue>
where
    F: Fn(ComplexValue) -> Result<ComplexValue>,
{
    // five-point stencil
    let h = FD_STEP;
    Ok((f(z - 2.0 * h)? - f(z + 2.0 * h)? + 8.0 * (f(z + h)? - f(z - h)?)) / (12.0 * h))
}

fn bessel_recurrence(rng: &mut ChaCha8Rng, ctl: &SeriesControl) -> IdentityCheck {
    let errors = (0..SAMPLES).map(|k| {
        // every fourth order is purely imaginary
        let re = if k % 4 == 0 { 0.0 } else { rng.random_range(-5.0..5.0) };
        let a = c(re, rng.random_range(-5.0..5.0));
        let z = r(rng.random_range(0.1..20.0));
        let lo = bessel_i(a - 1.0, z, ctl)?;
        let hi = bessel_i(a + 1.0, z, ctl)?;
        let mid = a * 2.0 / z * bessel_i(a, z, ctl)?;
        let scale = lo.norm().max(hi.norm()).max(mid.norm());
        Ok((lo - hi - mid).norm() / scale)
    });
    check(
        "bessel_i",
        "I(a-1,z) - I(a+1,z) = (2a/z) I(a,z)",
        1e-10,
        errors.collect::<Vec<_>>(),
    )
}

fn bessel_derivative(rng: &mut ChaCha8Rng, ctl: &SeriesControl) -> IdentityCheck {
    let errors = (0..SAMPLES / 4).map(|_| {
        let a = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let z = r(rng.random_range(0.5..10.0));
        let fd = central_difference(|s| bessel_i(a, s, ctl), z)?;
        Ok(rel(bessel_i_derivative(a, z, ctl)?, fd))
    });
    check(
        "bessel_i",
        "I'(a,z) = (I(a-1,z) + I(a+1,z))/2",
        1e-6,
        errors.collect::<Vec<_>>(),
    )
}

fn bessel_large_argument(ctl: &SeriesControl) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for a in [r(0.3), c(0.0, 1.5)] {
        let mut previous = f64::INFINITY;
        for (z, tol) in [(50.0, 0.10), (100.0, 0.05), (200.0, 0.025)] {
            let e = bessel_i(a, r(z), ctl).map(|v| {
                let dev = (v * (2.0 * std::f64::consts::PI * z).sqrt() * (-z).exp() - 1.0).norm();
                // the approach must also be monotone
                if dev <= previous {
                    previous = dev;
                    dev
                } else {
                    f64::INFINITY
                }
            });
            out.push(check("bessel_i", "I(a,z) sqrt(2 pi z) e^-z -> 1", tol, [e]));
        }
    }
    out
}

fn confluent_large_argument(ctl: &SeriesControl) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for z in [50.0f64, 100.0, 200.0] {
        let lead = gamma(r(3.0)) / gamma(r(2.0)) * z.exp() / z;
        out.push(check(
            "kummer_m",
            "1F1(a,b,z) ~ G(b)/G(a) e^z z^(a-b)",
            0.05,
            [kummer_m(r(2.0), r(3.0), r(z), ctl).map(|v| rel(v, lead))],
        ));
        out.push(check(
            "tricomi_u",
            "U(a,b,z) ~ z^-a",
            0.02,
            [tricomi_u(r(0.5), r(1.5), r(z), ctl).map(|v| rel(v, r(z.powf(-0.5))))],
        ));
    }
    out
}

fn whittaker_derivatives(rng: &mut ChaCha8Rng, ctl: &SeriesControl) -> Vec<IdentityCheck> {
    let mut points = vec![(r(0.3), r(0.7), r(0.5))];
    for _ in 0..20 {
        points.push((
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            c(rng.random_range(0.05..1.2), rng.random_range(-1.0..1.0)),
            r(rng.random_range(0.3..8.0)),
        ));
    }
    let m = points
        .iter()
        .map(|&(a, b, z)| {
            let fd = central_difference(|s| whittaker_m(a, b, s, ctl), z)?;
            Ok(rel(whittaker_m_derivative(a, b, z, ctl)?, fd))
        })
        .collect::<Vec<_>>();
    let w = points
        .iter()
        .map(|&(a, b, z)| {
            let fd = central_difference(|s| whittaker_w(a, b, s, ctl), z)?;
            Ok(rel(whittaker_w_derivative(a, b, z, ctl)?, fd))
        })
        .collect::<Vec<_>>();
    vec![
        check("whittaker_m", "M' = (1/2 - a/z) M(a) + (1/2 + a + b)/z M(a+1)", 1e-6, m),
        check("whittaker_w", "W' = (1/2 - a/z) W(a) - W(a+1)/z", 1e-6, w),
    ]
}

fn gauss_derivative(rng: &mut ChaCha8Rng, ctl: &SeriesControl) -> IdentityCheck {
    let mut points = vec![(r(0.5), r(0.5), r(1.5), r(0.25))];
    for _ in 0..20 {
        points.push((
            c(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)),
            c(rng.random_range(0.5..3.0), rng.random_range(-1.0..1.0)),
            r(rng.random_range(-0.8..0.8)),
        ));
    }
    let errors = points
        .iter()
        .map(|&(a, b, cc, z)| {
            let fd = central_difference(|s| gauss_2f1(a, b, cc, s, ctl), z)?;
            Ok(rel(gauss_2f1_derivative(a, b, cc, z, ctl)?, fd))
        })
        .collect::<Vec<_>>();
    check("gauss_2f1", "2F1' = (ab/c) 2F1(a+1, b+1; c+1)", 1e-6, errors)
}

type Evaluator = fn(ComplexValue, ComplexValue, &SeriesControl) -> Result<ComplexValue>;

/// Each entry evaluates one function with parameter `a` (possibly complex)
/// at a real positive argument.
fn evaluators() -> [(&'static str, Evaluator); 6] {
    [
        ("bessel_i", |a, z, ctl| bessel_i(a, z, ctl)),
        ("kummer_m", |a, z, ctl| kummer_m(a, r(1.7), z, ctl)),
        ("tricomi_u", |a, z, ctl| tricomi_u(a, r(1.3), z, ctl)),
        ("whittaker_m", |a, z, ctl| whittaker_m(a, r(0.35), z, ctl)),
        ("whittaker_w", |a, z, ctl| whittaker_w(a, r(0.35), z, ctl)),
        ("gauss_2f1", |a, z, ctl| gauss_2f1(a, r(0.6), r(1.9), z / 10.0, ctl)),
    ]
}

fn symmetries(ctl: &SeriesControl) -> Vec<IdentityCheck> {
    let params = [c(0.3, 0.8), c(-0.6, 0.4), c(1.4, -0.9)];
    let reals = [0.3, -0.7, 1.6];
    let args = [0.4, 2.5, 7.0];
    let mut out = Vec::new();
    for (name, f) in evaluators() {
        let conj = params
            .iter()
            .flat_map(|&a| args.iter().map(move |&z| (a, z)))
            .map(|(a, z)| Ok(rel(f(a.conj(), r(z), ctl)?, f(a, r(z), ctl)?.conj())))
            .collect::<Vec<_>>();
        out.push(check(name, "f(conj a, x) = conj f(a, x)", 1e-9, conj));
        let real = reals
            .iter()
            .flat_map(|&a| args.iter().map(move |&z| (a, z)))
            .map(|(a, z)| f(r(a), r(z), ctl).map(|v| v.im.abs() / v.re.abs()))
            .collect::<Vec<_>>();
        out.push(check(name, "real parameters give |im| < 1e-12 |re|", 1e-12, real));
    }
    out
}

/// Runs every identity with default series control and a fixed seed.
pub fn identity_suite() -> Vec<IdentityCheck> {
    let ctl = SeriesControl::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = vec![bessel_recurrence(&mut rng, &ctl), bessel_derivative(&mut rng, &ctl)];
    out.extend(bessel_large_argument(&ctl));
    out.extend(confluent_large_argument(&ctl));
    out.extend(whittaker_derivatives(&mut rng, &ctl));
    out.push(gauss_derivative(&mut rng, &ctl));
    out.extend(symmetries(&ctl));
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_identity_holds() {
        for check in super::identity_suite() {
            assert!(check.passed, "{check:?}");
        }
    }
}
