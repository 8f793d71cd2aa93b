//! Two-type continuous-time branching process of self-renewing stem cells
//! (type A) feeding committed cells (type B).
//!
//! An A-cell divides after an `Exp(lambda_a)` lifetime into two progeny, each
//! of which independently stays an A-cell with probability `1 - alpha` or
//! commits to B with probability `alpha`. A B-cell divides after an
//! `Exp(lambda_b)` lifetime into two progeny, each of which stays a B-cell with
//! probability `q = 1 - p` and is lost with probability `p`.
//!
//! The crate provides
//!
//! - [`model`]: parameters, criticality classification and progeny PGFs,
//! - [`specfun`]: complex-order Bessel, Kummer, Tricomi, Whittaker and Gauss
//!   hypergeometric functions,
//! - [`moments`]: closed-form expected cell counts,
//! - [`pgf`]: the exact joint generating function `F_A(x, y, t)` in each
//!   criticality regime,
//! - [`asymptotics`]: long-time extinction limits and rates,
//! - [`oracle`]: independent checks (RK4 on the backward equations, exact
//!   stochastic simulation and lattice inversion of the PGF).
//!
//! Complex powers use the principal branch throughout: `z^s = exp(s log z)`
//! with `arg z` in `(-pi, pi]`.

pub mod asymptotics;
pub mod error;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod pgf;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{Criticality, CriticalityRegime, ModelParams, TheoremBranch};

/// Complex scalar used for all special-function and PGF arithmetic.
pub type ComplexValue = num_complex::Complex64;
