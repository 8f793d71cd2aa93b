//! Special functions with complex parameters and complex arguments.
//!
//! Everything here is evaluated from its defining power series with adaptive
//! truncation, except the Tricomi function at large argument, which uses its
//! asymptotic series. Complex powers take the principal branch.

mod bessel;
mod confluent;
mod gamma;
mod gauss;
mod identities;

pub use bessel::{bessel_i, bessel_i_derivative};
pub use confluent::{kummer_m, tricomi_u, whittaker_m, whittaker_m_derivative, whittaker_w, whittaker_w_derivative};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use gauss::{gauss_2f1, gauss_2f1_derivative, GAUSS_2F1_MARGIN};
pub use identities::{identity_suite, IdentityCheck};

use crate::{ComplexValue, Error, Result};

/// Truncation control for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if rel_tol.is_nan() || rel_tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("rel_tol = {rel_tol} must be > 0")));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

/// Number of consecutive negligible terms required before stopping.
const QUIET_TERMS: usize = 3;

/// A series whose largest term exceeds its sum by this factor has lost too
/// many digits to be trusted.
const CANCELLATION_LIMIT: f64 = 1e10;

/// Sums `first + t_1 + t_2 + ...` where `next(k, t_k)` yields `t_{k+1}`.
fn sum_series<F>(function: &'static str, first: ComplexValue, ctl: &SeriesControl, mut next: F) -> Result<ComplexValue>
where
    F: FnMut(usize, ComplexValue) -> ComplexValue,
{
    let mut sum = first;
    let mut term = first;
    let mut largest = first.norm();
    let mut quiet = 0;
    for k in 0..ctl.max_terms {
        term = next(k, term);
        sum += term;
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(Error::Convergence {
                function,
                reason: format!("overflow after {} terms", k + 1),
            });
        }
        let size = term.norm();
        largest = largest.max(size);
        if size <= ctl.rel_tol * sum.norm() {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                if largest > CANCELLATION_LIMIT * sum.norm() {
                    return Err(Error::Convergence {
                        function,
                        reason: format!("cancellation: largest term {largest:e} vs sum {:e}", sum.norm()),
                    });
                }
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence {
        function,
        reason: format!("no convergence within {} terms", ctl.max_terms),
    })
}

/// True when `z` is real and a non-positive integer.
pub(crate) fn is_nonpositive_integer(z: ComplexValue) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

pub(crate) fn is_integer(z: ComplexValue) -> bool {
    z.im == 0.0 && z.re.fract() == 0.0
}

/// Principal-branch power.
pub(crate) fn cpow(z: ComplexValue, s: ComplexValue) -> ComplexValue {
    if z == ComplexValue::new(0.0, 0.0) {
        if s == ComplexValue::new(0.0, 0.0) {
            return ComplexValue::new(1.0, 0.0);
        }
        return ComplexValue::new(0.0, 0.0);
    }
    (s * z.ln()).exp()
}
