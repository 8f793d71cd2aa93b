use super::*;
use crate::model::progeny_pgf_a;
use crate::moments::expected_counts;
use approx::assert_abs_diff_eq;

fn c(re: f64) -> ComplexValue {
    ComplexValue::new(re, 0.0)
}

fn params(alpha: f64, p: f64, la: f64, lb: f64) -> ModelParams {
    ModelParams::new(alpha, p, la, lb).unwrap()
}

/// One parameter set per closed form, including an imaginary-theta
/// bi-critical case and both signs of A-criticality.
fn regimes() -> Vec<ModelParams> {
    vec![
        params(0.5, 0.5, 1.0, 1.0),
        params(0.5, 0.5, 0.2, 1.0),
        params(0.25, 0.5, 1.0, 1.0),
        params(0.7, 0.5, 0.3, 2.0),
        params(0.5, 0.3, 1.0, 1.0),
        params(0.3, 0.45, 0.2, 1.0),
    ]
}

#[test]
fn transform_examples() {
    let m = params(0.5, 0.5, 1.0, 4.0);
    assert_eq!(transform_w(c(0.0), 0.0, &m).unwrap(), c(1.0));
    assert_eq!(transform_w(c(0.0), 1.0, &m).unwrap(), c(2.0));
    assert!(matches!(
        transform_w(c(1.0), 1.0, &m),
        Err(Error::SingularTransform { .. })
    ));
    let m = params(0.5, 0.3, 1.0, 1.0);
    assert_abs_diff_eq!(transform_z(c(0.0), 0.0, &m).unwrap().re, 0.09, epsilon = 1e-15);
    assert_abs_diff_eq!(
        transform_z(c(0.0), 1.0, &m).unwrap().re,
        0.09 * (-0.4f64).exp(),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(transform_z(c(0.0), 1.0, &m).unwrap().re, 0.060330, epsilon = 2e-6);
    assert!(transform_z(c(1.0), 0.0, &m).is_err());
    let s = TransformState::new(c(0.4), 0.0, &m).unwrap();
    assert_eq!(s.z, s.p_big);
}

#[test]
fn pgf_b_examples() {
    for m in regimes() {
        assert_eq!(pgf_b(c(0.7), 0.0, &m).unwrap(), c(0.7));
    }
    let crit = params(0.5, 0.5, 1.0, 1.0);
    assert_abs_diff_eq!(pgf_b(c(0.0), 2.0, &crit).unwrap().re, 1.0 / 3.0, epsilon = 1e-15);
    let sup = params(0.5, 0.3, 1.0, 1.0);
    assert_abs_diff_eq!(pgf_b(c(0.0), 50.0, &sup).unwrap().re, 9.0 / 49.0, epsilon = 1e-8);
    assert_eq!(pgf_b(c(1.0), 3.0, &sup).unwrap(), c(1.0));
}

#[test]
fn pgf_b_matches_oracle() {
    for m in regimes().into_iter().chain([params(0.5, 0.8, 1.0, 1.5)]) {
        for y in [0.0, 0.3, 0.7, 1.0] {
            for t in [0.1, 1.0, 5.0] {
                let (_, fb) = integrate_backward(c(0.0), c(y), t, &m, &StepControl::default()).unwrap();
                assert_abs_diff_eq!(pgf_b(c(y), t, &m).unwrap().re, fb.re, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn trivial_values() {
    for m in regimes() {
        assert_eq!(pgf_a(c(0.4), c(0.9), 0.0, &m, Method::Auto).unwrap(), c(0.4));
        let one = pgf_a_real(1.0, 1.0, 3.7, &m, Method::Auto).unwrap();
        assert_abs_diff_eq!(one, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn bicritical_imaginary_theta_example() {
    let m = params(0.5, 0.5, 1.0, 1.0);
    let closed = pgf_a_real(0.0, 0.0, 5.0, &m, Method::ClosedForm).unwrap();
    let ode = pgf_a_real(0.0, 0.0, 5.0, &m, Method::Oracle).unwrap();
    assert_abs_diff_eq!(closed, ode, epsilon = 1e-6);
    let k = regime_constants(c(0.0), c(0.0), &m).unwrap();
    let th = k.theta.unwrap();
    assert_abs_diff_eq!((th * th - (1.0 - k.mu)).norm(), 0.0, epsilon = 1e-14);
    assert!(th.re.abs() < 1e-15 && th.im > 0.0);
}

#[test]
fn constants_satisfy_invariants() {
    let m = params(0.25, 0.5, 1.0, 1.0);
    let k = regime_constants(c(0.0), c(0.0), &m).unwrap();
    assert_abs_diff_eq!(k.theta.unwrap().re, 0.5 * k.mu.re, epsilon = 1e-15);
    assert_abs_diff_eq!(k.theta1.unwrap().re, -k.mu.re * 0.25 * 0.75 / 0.5, epsilon = 1e-15);
    let m = params(0.3, 0.4, 1.0, 1.0);
    let k = regime_constants(c(0.0), c(0.0), &m).unwrap();
    let (p, q) = (0.4, 0.6);
    let t1q = k.theta1.unwrap() * q / k.mu;
    assert_abs_diff_eq!((t1q * t1q).re, q * q - 4.0 * 0.3 * 0.7 * p * p, epsilon = 1e-14);
    assert_abs_diff_eq!(k.theta3.unwrap().re, k.mu.re * 0.4, epsilon = 1e-15);
}

#[test]
fn closed_form_matches_oracle() {
    let mut compared = 0;
    for m in regimes() {
        for x in [0.0, 0.3, 0.7, 1.0] {
            for y in [0.0, 0.3, 0.7] {
                for t in [0.1, 1.0, 5.0] {
                    let Ok(closed) = pgf_a_real(x, y, t, &m, Method::ClosedForm) else {
                        continue;
                    };
                    let ode = pgf_a_real(x, y, t, &m, Method::Oracle).unwrap();
                    assert!((closed - ode).abs() < 1e-6, "{m} x={x} y={y} t={t}: {closed} vs {ode}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared >= 150, "only {compared} closed-form points");
}

#[test]
fn auto_falls_back_with_reason() {
    let m = params(0.3, 0.45, 0.2, 1.0);
    let v = evaluate(c(0.5), c(1.0), 1.0, &m, Method::Auto).unwrap();
    assert_eq!(v.method_used, Method::Oracle);
    assert!(v.fallback_reason.is_some());
    assert!(evaluate(c(0.5), c(1.0), 1.0, &m, Method::ClosedForm).is_err());
    let v = evaluate(c(0.5), c(0.2), 1.0, &m, Method::Auto).unwrap();
    assert_eq!(v.method_used, Method::ClosedForm);

    // Sub-critical B: the hypergeometric argument leaves the unit disk.
    let sub = params(0.3, 0.7, 1.0, 1.0);
    let v = evaluate(c(0.0), c(0.0), 1.0, &sub, Method::Auto).unwrap();
    assert_eq!(v.method_used, Method::Oracle);

    let corner = params(1.0, 0.3, 1.0, 1.0);
    assert!(matches!(
        pgf_a(c(0.0), c(0.0), 1.0, &corner, Method::ClosedForm),
        Err(Error::UnsupportedRegime(_))
    ));
    assert!(pgf_a(c(0.0), c(0.0), 1.0, &corner, Method::Auto).is_ok());
}

#[test]
fn rejects_bad_inputs() {
    let m = params(0.5, 0.5, 1.0, 1.0);
    assert!(pgf_a_real(2.0, 0.0, 1.0, &m, Method::Auto).is_err());
    assert!(pgf_a_real(0.0, 0.0, -1.0, &m, Method::Auto).is_err());
    assert!(pgf_a(c(1.5), c(0.0), 1.0, &m, Method::Auto).is_err());
}

#[test]
fn degenerate_bessel_orders() {
    let m = params(0.5, 0.5, 0.25, 1.0);
    assert!(matches!(
        pgf_a(c(0.0), c(0.0), 1.0, &m, Method::ClosedForm),
        Err(Error::DegenerateParameter(_))
    ));
}

#[test]
fn backward_equation_residual() {
    let h = 1e-5;
    for m in regimes() {
        for x in [0.0, 0.3, 0.7, 1.0] {
            for y in [0.0, 0.3, 0.7, 1.0] {
                for t in [0.1, 1.0, 5.0] {
                    let f = |s| pgf_a(c(x), c(y), s, &m, Method::Auto).unwrap();
                    let d = (f(t + h) - f(t - h)) / (2.0 * h);
                    let fa = f(t);
                    let fb = pgf_b(c(y), t, &m).unwrap();
                    let rhs = (progeny_pgf_a(fa, fb, &m) - fa) * m.lambda_a();
                    assert!((d - rhs).norm() < 1e-4, "{m} x={x} y={y} t={t}");
                }
            }
        }
    }
}

#[test]
fn semigroup_composition() {
    let draws = [(0.2, 0.6, 0.7, 1.3), (0.9, 0.1, 2.0, 0.5), (0.5, 0.5, 0.3, 3.0)];
    for m in regimes() {
        for (x, y, s, t) in draws {
            let inner = pgf_a(c(x), c(y), s, &m, Method::Auto).unwrap();
            let yb = pgf_b(c(y), s, &m).unwrap();
            let lhs = pgf_a(c(x), c(y), s + t, &m, Method::Auto).unwrap();
            let rhs = pgf_a(inner, yb, t, &m, Method::Auto).unwrap();
            assert!((lhs - rhs).norm() < 1e-6, "{m} {x} {y} {s} {t}");
        }
    }
}

#[test]
fn monotone_in_both_arguments() {
    let grid = [0.0, 0.25, 0.5, 0.75, 0.95];
    for m in regimes() {
        let f = |x, y| pgf_a_real(x, y, 1.0, &m, Method::Auto).unwrap();
        for w in grid.windows(2) {
            for &o in &grid {
                assert!(f(w[1], o) >= f(w[0], o) - 1e-12);
                assert!(f(o, w[1]) >= f(o, w[0]) - 1e-12);
            }
        }
    }
}

#[test]
fn finite_difference_moments() {
    // Richardson on one-sided differences at the corner (1, 1).
    for m in regimes() {
        let t = 1.0;
        let mean = expected_counts(&m, t);
        let fa = |x, y| pgf_a_real(x, y, t, &m, Method::Auto).unwrap();
        let d = |g: &dyn Fn(f64) -> f64, h: f64| (1.0 - g(h)) / h;
        let rich = |g: &dyn Fn(f64) -> f64| 2.0 * d(g, 1e-3) - d(g, 2e-3);
        let ea = rich(&|h| fa(1.0 - h, 1.0));
        let eb = rich(&|h| fa(1.0, 1.0 - h));
        assert!((ea - mean.e_a).abs() < 1e-4 * mean.e_a, "{m}: {ea} vs {}", mean.e_a);
        assert!((eb - mean.e_b).abs() < 1e-4 * mean.e_b, "{m}: {eb} vs {}", mean.e_b);
    }
}

#[test]
fn residual_is_small_for_both_methods() {
    let m = params(0.25, 0.5, 1.0, 1.0);
    for method in [Method::ClosedForm, Method::Oracle] {
        for t in [0.0, 1.0] {
            let r = backward_residual(c(0.3), c(0.4), t, &m, method).unwrap();
            assert!(r < 1e-6, "{method:?} t={t}: {r}");
        }
    }
}
