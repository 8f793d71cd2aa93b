use crate::model::{progeny_pgf_a, progeny_pgf_b};
use crate::{ComplexValue, Error, ModelParams, Result};

/// Step control for [`integrate_backward`].
///
/// The first pass uses `h = min(max_step, t / 100)`; the step is halved until
/// two successive passes agree to `tol_per_unit_time * max(t, 1)` (after the
/// usual `1/15` RK4 Richardson factor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub max_step: f64,
    pub tol_per_unit_time: f64,
    pub min_step: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            max_step: 1e-3,
            tol_per_unit_time: 1e-9,
            min_step: 1e-12,
        }
    }
}

type State = (ComplexValue, ComplexValue);

fn rhs(state: State, params: &ModelParams) -> State {
    let (fa, fb) = state;
    let la = params.lambda_a();
    let lb = params.lambda_b();
    (
        (progeny_pgf_a(fa, fb, params) - fa) * la,
        (progeny_pgf_b(fb, params) - fb) * lb,
    )
}

fn rk4(start: State, t: f64, steps: u64, params: &ModelParams) -> State {
    let h = t / steps as f64;
    let mut s = start;
    for _ in 0..steps {
        let k1 = rhs(s, params);
        let k2 = rhs((s.0 + k1.0 * (0.5 * h), s.1 + k1.1 * (0.5 * h)), params);
        let k3 = rhs((s.0 + k2.0 * (0.5 * h), s.1 + k2.1 * (0.5 * h)), params);
        let k4 = rhs((s.0 + k3.0 * h, s.1 + k3.1 * h), params);
        s.0 += (k1.0 + (k2.0 + k3.0) * 2.0 + k4.0) * (h / 6.0);
        s.1 += (k1.1 + (k2.1 + k3.1) * 2.0 + k4.1) * (h / 6.0);
    }
    s
}

/// Solves `F_A' = lambda_a (h_A(F_A, F_B) - F_A)`, `F_B' = lambda_b (h_B(F_B) - F_B)`
/// from `(x, y)` at time 0 to time `t`, returning `(F_A(t), F_B(t))`.
pub fn integrate_backward(
    x: ComplexValue,
    y: ComplexValue,
    t: f64,
    params: &ModelParams,
    ctl: &StepControl,
) -> Result<(ComplexValue, ComplexValue)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t = {t} must be finite and >= 0")));
    }
    if t == 0.0 {
        return Ok((x, y));
    }
    let h0 = ctl.max_step.min(t / 100.0);
    let mut steps = (t / h0).ceil() as u64;
    let mut coarse = rk4((x, y), t, steps, params);
    let tol = ctl.tol_per_unit_time * t.max(1.0);
    loop {
        steps *= 2;
        if t / (steps as f64) < ctl.min_step {
            return Err(Error::StepUnderflow { min_step: ctl.min_step });
        }
        let fine = rk4((x, y), t, steps, params);
        let err = (fine.0 - coarse.0).norm().max((fine.1 - coarse.1).norm()) / 15.0;
        if err <= tol {
            return Ok(fine);
        }
        coarse = fine;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn initial_condition_and_fixed_point() {
        let m = ModelParams::new(0.3, 0.4, 1.0, 2.0).unwrap();
        let ctl = StepControl::default();
        let (a, b) = integrate_backward(c(0.2, 0.1), c(0.5, -0.3), 0.0, &m, &ctl).unwrap();
        assert_eq!((a, b), (c(0.2, 0.1), c(0.5, -0.3)));
        let (a, b) = integrate_backward(c(1.0, 0.0), c(1.0, 0.0), 7.3, &m, &ctl).unwrap();
        assert!((a - 1.0).norm() < 1e-13 && (b - 1.0).norm() < 1e-13);
    }

    #[test]
    fn critical_b_matches_rational_solution() {
        let m = ModelParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let (_, fb) = integrate_backward(c(0.0, 0.0), c(0.0, 0.0), 2.0, &m, &StepControl::default()).unwrap();
        assert!((fb.re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn stays_in_unit_polydisk() {
        let m = ModelParams::new(0.35, 0.45, 1.5, 0.8).unwrap();
        let ctl = StepControl::default();
        for k in 0..12 {
            let phase = std::f64::consts::TAU * k as f64 / 12.0;
            let x = c(phase.cos(), phase.sin());
            let y = c((2.0 * phase).cos(), -(2.0 * phase).sin());
            for t in [0.5, 2.0, 6.0] {
                let (a, b) = integrate_backward(x, y, t, &m, &ctl).unwrap();
                assert!(a.norm() <= 1.0 + 1e-9 && b.norm() <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn rejects_negative_time() {
        let m = ModelParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        assert!(integrate_backward(c(0.0, 0.0), c(0.0, 0.0), -1.0, &m, &StepControl::default()).is_err());
    }

    #[test]
    fn step_underflow_reported() {
        let m = ModelParams::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let ctl = StepControl {
            max_step: 1e-3,
            tol_per_unit_time: 0.0,
            min_step: 1e-5,
        };
        assert!(matches!(
            integrate_backward(c(0.3, 0.0), c(0.2, 0.0), 1.0, &m, &ctl),
            Err(Error::StepUnderflow { .. })
        ));
    }
}
