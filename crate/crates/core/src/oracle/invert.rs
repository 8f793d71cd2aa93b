//! Probability mass recovery from the generating function on a lattice of
//! roots of unity.

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::ode::{integrate_backward, StepControl};
use crate::{ComplexValue, Error, ModelParams, Result};

/// `probs[j][k]` approximates `P(Z_A(t) = j, Z_B(t) = k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfGrid {
    pub probs: Vec<Vec<f64>>,
    pub t: f64,
    /// `1 - sum(probs)`: mass outside the reported window, plus aliasing.
    pub truncation_mass: f64,
}

impl PmfGrid {
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.probs[j][k]
    }

    /// Row sums, i.e. the marginal law of `Z_A` restricted to the window.
    pub fn marginal_a(&self) -> Vec<f64> {
        self.probs.iter().map(|row| row.iter().sum()).collect()
    }
}

fn lattice_size(max_index: usize) -> usize {
    (2 * (max_index + 1)).next_power_of_two()
}

fn root_of_unity(i: usize, n: usize) -> ComplexValue {
    ComplexValue::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / n as f64)
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be finite and >= 0")))
    }
}

/// Joint pmf on `0..=j_max` by `0..=k_max`.
///
/// The generating function is sampled with the RK4 oracle at
/// `(w_M^a, w_N^b)` and a forward 2-D DFT divided by `MN` returns the
/// coefficients. Tiny negative values from round-off are clamped to zero.
pub fn invert_pgf(params: &ModelParams, t: f64, j_max: usize, k_max: usize) -> Result<PmfGrid> {
    check_time(t)?;
    let (m, n) = (lattice_size(j_max), lattice_size(k_max));
    let ctl = StepControl::default();
    let mut data: Vec<ComplexValue> = (0..m * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / n, idx % n);
            integrate_backward(root_of_unity(a, m), root_of_unity(b, n), t, params, &ctl).map(|(fa, _)| fa)
        })
        .collect::<Result<_>>()?;

    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(m);
    let mut col = vec![ComplexValue::new(0.0, 0.0); m];
    for k in 0..n {
        for a in 0..m {
            col[a] = data[a * n + k];
        }
        col_fft.process(&mut col);
        for a in 0..m {
            data[a * n + k] = col[a];
        }
    }

    let scale = 1.0 / (m * n) as f64;
    let probs: Vec<Vec<f64>> = (0..=j_max)
        .map(|j| (0..=k_max).map(|k| (data[j * n + k].re * scale).max(0.0)).collect())
        .collect();
    let total: f64 = probs.iter().flatten().sum();
    Ok(PmfGrid {
        probs,
        t,
        truncation_mass: 1.0 - total,
    })
}

/// Marginal pmf of `Z_A` on `0..=j_max` from the 1-D lattice `F_A(w_M^a, 1, t)`.
pub fn invert_pgf_marginal_a(params: &ModelParams, t: f64, j_max: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    let m = lattice_size(j_max);
    let ctl = StepControl::default();
    let one = ComplexValue::new(1.0, 0.0);
    let mut data: Vec<ComplexValue> = (0..m)
        .into_par_iter()
        .map(|a| integrate_backward(root_of_unity(a, m), one, t, params, &ctl).map(|(fa, _)| fa))
        .collect::<Result<_>>()?;
    FftPlanner::new().plan_fft_forward(m).process(&mut data);
    Ok(data[..=j_max].iter().map(|c| (c.re / m as f64).max(0.0)).collect())
}
