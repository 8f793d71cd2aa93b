//! Expected cell counts.
//!
//! `E_A' = lambda_a (1 - 2 alpha) E_A` and
//! `E_B' = 2 lambda_a alpha E_A + lambda_b (q^2 - p^2) E_B`
//! with `E_A(0) = 1`, `E_B(0) = 0`.

use serde::Serialize;

use crate::ModelParams;

/// Relative gap between the two growth exponents below which the
/// coincident-exponent formula is used.
pub const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPair {
    pub t: f64,
    pub e_a: f64,
    pub e_b: f64,
}

/// Closed-form `(E_A(t), E_B(t))` for `t >= 0`.
///
/// When the A and B growth exponents coincide (this includes the bi-critical
/// case, where both vanish) the particular solution degenerates and its
/// limit `2 lambda_a alpha t e^(g t)` is returned instead.
///
/// The source term is the mean number of B-cells per A-division, `2 alpha`,
/// as implied by the A-progeny law.
pub fn expected_counts(params: &ModelParams, t: f64) -> MomentPair {
    let ga = params.growth_a();
    let gb = params.growth_b();
    let e_a = (ga * t).exp();
    let source = 2.0 * params.lambda_a() * params.alpha();
    let gap = ga - gb;
    let e_b = if gap.abs() < RESONANCE_TOL * params.lambda_a().max(params.lambda_b()) {
        source * t * e_a
    } else {
        // (e^{ga t} - e^{gb t}) / (ga - gb) = e^{gb t} expm1(gap t) / gap
        source * (gb * t).exp() * (gap * t).exp_m1() / gap
    };
    MomentPair { t, e_a, e_b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(alpha: f64, p: f64, la: f64, lb: f64) -> ModelParams {
        ModelParams::new(alpha, p, la, lb).unwrap()
    }

    /// Classical RK4 on the moment ODEs themselves.
    fn rk4_moments(m: &ModelParams, t: f64) -> (f64, f64) {
        let (ga, gb) = (m.growth_a(), m.growth_b());
        let src = 2.0 * m.lambda_a() * m.alpha();
        let rhs = |a: f64, b: f64| (ga * a, src * a + gb * b);
        let n = 20_000;
        let h = t / n as f64;
        let (mut a, mut b) = (1.0, 0.0);
        for _ in 0..n {
            let k1 = rhs(a, b);
            let k2 = rhs(a + 0.5 * h * k1.0, b + 0.5 * h * k1.1);
            let k3 = rhs(a + 0.5 * h * k2.0, b + 0.5 * h * k2.1);
            let k4 = rhs(a + h * k3.0, b + h * k3.1);
            a += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            b += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        (a, b)
    }

    #[test]
    fn bicritical_is_linear() {
        let m = expected_counts(&params(0.5, 0.5, 1.0, 1.0), 2.0);
        assert_eq!(m.e_a, 1.0);
        assert_relative_eq!(m.e_b, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn initial_condition() {
        for m in [params(0.2, 0.7, 2.0, 0.5), params(0.5, 0.5, 1.0, 1.0)] {
            let mp = expected_counts(&m, 0.0);
            assert_eq!((mp.e_a, mp.e_b), (1.0, 0.0));
        }
    }

    #[test]
    fn supercritical_a_example() {
        let m = expected_counts(&params(0.25, 0.5, 1.0, 1.0), 1.0);
        assert_relative_eq!(m.e_a, 0.5f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(m.e_b, 0.5f64.exp() - 1.0, max_relative = 1e-14);
        let (a, b) = rk4_moments(&params(0.25, 0.5, 1.0, 1.0), 1.0);
        assert_relative_eq!(m.e_a, a, max_relative = 1e-10);
        assert_relative_eq!(m.e_b, b, max_relative = 1e-10);
    }

    #[test]
    fn matches_rk4_across_grid() {
        for alpha in [0.1, 0.5, 0.8] {
            for p in [0.2, 0.5, 0.75] {
                for (la, lb) in [(1.0, 1.0), (0.4, 2.5)] {
                    let m = params(alpha, p, la, lb);
                    let got = expected_counts(&m, 3.0);
                    let (a, b) = rk4_moments(&m, 3.0);
                    assert_relative_eq!(got.e_a, a, max_relative = 1e-9);
                    assert_relative_eq!(got.e_b, b, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        let h = 1e-5;
        for alpha in [0.2, 0.5, 0.65] {
            for p in [0.3, 0.5, 0.6] {
                let m = params(alpha, p, 1.3, 0.7);
                let src = 2.0 * m.lambda_a() * alpha;
                for t in [0.3, 1.0, 4.0] {
                    let lo = expected_counts(&m, t - h);
                    let mid = expected_counts(&m, t);
                    let hi = expected_counts(&m, t + h);
                    let da = (hi.e_a - lo.e_a) / (2.0 * h);
                    let db = (hi.e_b - lo.e_b) / (2.0 * h);
                    let ra = da - m.growth_a() * mid.e_a;
                    let rb = db - src * mid.e_a - m.growth_b() * mid.e_b;
                    assert!(ra.abs() <= 1e-5 * da.abs().max(mid.e_a), "alpha={alpha} p={p} t={t}");
                    assert!(rb.abs() <= 1e-5 * db.abs().max(mid.e_b), "alpha={alpha} p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn resonance_limit_is_continuous() {
        // growth_a = 1 * (1 - 2*0.3) = 0.4 ; growth_b = lb * (q^2 - p^2) = lb * (1 - 2p)
        // choose p = 0.3, lb = 1 -> 0.4
        let m = params(0.3, 0.3, 1.0, 1.0);
        assert!((m.growth_a() - m.growth_b()).abs() < 1e-12);
        let at = expected_counts(&m, 2.5);
        let (_, b) = rk4_moments(&m, 2.5);
        assert_relative_eq!(at.e_b, b, max_relative = 1e-9);
        for d in [1e-7, -1e-7] {
            let near = expected_counts(&params(0.3, 0.3, 1.0, 1.0 + d), 2.5);
            assert_relative_eq!(at.e_b, near.e_b, max_relative = 1e-3);
        }
    }

    #[test]
    fn e_a_positive_and_e_b_zero_only_at_origin() {
        let m = params(0.9, 0.8, 3.0, 0.2);
        for t in [1e-6, 0.5, 10.0, 100.0] {
            let mp = expected_counts(&m, t);
            assert!(mp.e_a > 0.0 && mp.e_b > 0.0);
        }
    }
}
