//! Independent verification engines: RK4 on the backward equations, exact
//! stochastic simulation and lattice inversion of the generating function.

mod invert;
mod ode;
mod sim;

pub use invert::{invert_pgf, invert_pgf_marginal_a, PmfGrid};
pub use ode::{integrate_backward, StepControl};
pub use sim::{
    estimate_extinction, estimate_moments, estimate_pgf, replicate_rng, sample_final_states, simulate,
    simulate_replicate, Caps, EstimateWithCI, Event, FinalState, Trajectory, Z_99,
};
