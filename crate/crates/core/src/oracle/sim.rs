//! Exact continuous-time simulation of the two-type process.
//!
//! B-divisions that leave exactly one B-cell (probability `2pq`) do not change
//! the counts, so they are thinned out: B-cells fire at rate
//! `lambda_b (p^2 + q^2)` and the surviving outcomes are renormalised. A-cells
//! fire at rate `lambda_a` with outcomes AA, AB, BB.
//!
//! Random streams: replicate `r` of master seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` switched to stream `r`. Replicates are thus
//! independent of one another and of the order in which they run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, ModelParams, Result};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Minimum replicate count accepted by the estimators.
pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_cells: u64,
    pub max_events: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_cells: 10_000_000,
            max_events: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    #[serde(rename = "za")]
    pub z_a: u64,
    #[serde(rename = "zb")]
    pub z_b: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Starts with the initial state `(0, 1, 0)`; one entry per event after that.
    pub events: Vec<Event>,
    pub seed: u64,
    pub truncated: bool,
}

/// State at the end of a replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FinalState {
    pub z_a: u64,
    pub z_b: u64,
    pub events: u64,
    pub truncated: bool,
}

impl FinalState {
    pub fn is_extinct(&self) -> bool {
        !self.truncated && self.z_a == 0 && self.z_b == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateWithCI {
    pub value: f64,
    pub half_width_99: f64,
    pub replicates: usize,
    /// Replicates that hit a cap; they count as non-extinct.
    pub truncated_replicates: usize,
}

impl EstimateWithCI {
    pub fn standard_error(&self) -> f64 {
        self.half_width_99 / Z_99
    }

    pub fn covers(&self, v: f64) -> bool {
        (v - self.value).abs() <= self.half_width_99
    }
}

pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

struct Rates {
    lambda_a: f64,
    lambda_b_eff: f64,
    aa: f64,
    aa_or_ab: f64,
    bb_given_event: f64,
}

impl Rates {
    fn new(params: &ModelParams) -> Self {
        let (alpha, p, q) = (params.alpha(), params.p(), params.q());
        let keep = p * p + q * q;
        Self {
            lambda_a: params.lambda_a(),
            lambda_b_eff: params.lambda_b() * keep,
            aa: (1.0 - alpha) * (1.0 - alpha),
            aa_or_ab: (1.0 - alpha) * (1.0 - alpha) + 2.0 * alpha * (1.0 - alpha),
            bb_given_event: q * q / keep,
        }
    }
}

fn run<R: Rng, F: FnMut(f64, u64, u64)>(
    rates: &Rates,
    t_max: f64,
    caps: &Caps,
    rng: &mut R,
    mut on_event: F,
) -> FinalState {
    let (mut z_a, mut z_b) = (1u64, 0u64);
    let mut t = 0.0;
    let mut events = 0u64;
    let mut truncated = false;
    while z_a + z_b > 0 {
        let rate_a = rates.lambda_a * z_a as f64;
        let total = rate_a + rates.lambda_b_eff * z_b as f64;
        let wait: f64 = rng.sample(Exp1);
        t += wait / total;
        if t > t_max {
            break;
        }
        if events >= caps.max_events {
            truncated = true;
            break;
        }
        if rng.random::<f64>() * total < rate_a {
            let u: f64 = rng.random();
            if u < rates.aa {
                z_a += 1;
            } else if u < rates.aa_or_ab {
                z_b += 1;
            } else {
                z_a -= 1;
                z_b += 2;
            }
        } else if rng.random::<f64>() < rates.bb_given_event {
            z_b += 1;
        } else {
            z_b -= 1;
        }
        events += 1;
        on_event(t, z_a, z_b);
        if z_a + z_b > caps.max_cells {
            truncated = true;
            break;
        }
    }
    FinalState {
        z_a,
        z_b,
        events,
        truncated,
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} must be finite and >= 0")))
    }
}

/// One realisation on `[0, t_max]`, using replicate stream 0 of `seed`.
pub fn simulate(params: &ModelParams, t_max: f64, seed: u64, caps: &Caps) -> Result<Trajectory> {
    simulate_replicate(params, t_max, seed, 0, caps)
}

/// Full event history of replicate `replicate`; its final state equals
/// entry `replicate` of [`sample_final_states`] with the same seed.
pub fn simulate_replicate(
    params: &ModelParams,
    t_max: f64,
    seed: u64,
    replicate: u64,
    caps: &Caps,
) -> Result<Trajectory> {
    check_time(t_max)?;
    let mut events = vec![Event { t: 0.0, z_a: 1, z_b: 0 }];
    let mut rng = replicate_rng(seed, replicate);
    let end = run(&Rates::new(params), t_max, caps, &mut rng, |t, z_a, z_b| {
        events.push(Event { t, z_a, z_b })
    });
    Ok(Trajectory {
        events,
        seed,
        truncated: end.truncated,
    })
}

/// Final states of `replicates` independent runs, in replicate order.
pub fn sample_final_states(
    params: &ModelParams,
    t: f64,
    replicates: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Vec<FinalState>> {
    check_time(t)?;
    let rates = Rates::new(params);
    Ok((0..replicates as u64)
        .into_par_iter()
        .map(|r| run(&rates, t, caps, &mut replicate_rng(seed, r), |_, _, _| {}))
        .collect())
}

fn check_replicates(replicates: usize) -> Result<()> {
    if replicates < MIN_REPLICATES {
        return Err(Error::InvalidParameter(format!(
            "replicates = {replicates} below the minimum of {MIN_REPLICATES}"
        )));
    }
    Ok(())
}

fn mean_with_ci(values: &[f64], truncated: usize) -> EstimateWithCI {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    EstimateWithCI {
        value: mean,
        half_width_99: Z_99 * (var / n).sqrt(),
        replicates: values.len(),
        truncated_replicates: truncated,
    }
}

/// Fraction of replicates extinct at time `t`, with a 99% normal-theory interval.
pub fn estimate_extinction(params: &ModelParams, t: f64, replicates: usize, seed: u64) -> Result<EstimateWithCI> {
    check_replicates(replicates)?;
    let states = sample_final_states(params, t, replicates, seed, &Caps::default())?;
    let extinct = states.iter().filter(|s| s.is_extinct()).count();
    let n = replicates as f64;
    let frac = extinct as f64 / n;
    Ok(EstimateWithCI {
        value: frac,
        half_width_99: Z_99 * (frac * (1.0 - frac) / n).sqrt(),
        replicates,
        truncated_replicates: states.iter().filter(|s| s.truncated).count(),
    })
}

/// Sample mean of `x^Z_A y^Z_B` at time `t` for real `x, y` in `[0, 1]`.
pub fn estimate_pgf(
    params: &ModelParams,
    x: f64,
    y: f64,
    t: f64,
    replicates: usize,
    seed: u64,
) -> Result<EstimateWithCI> {
    check_replicates(replicates)?;
    if !((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)) {
        return Err(Error::InvalidParameter(format!("x = {x}, y = {y} must lie in [0, 1]")));
    }
    let states = sample_final_states(params, t, replicates, seed, &Caps::default())?;
    let values: Vec<f64> = states
        .iter()
        .map(|s| x.powi(s.z_a as i32) * y.powi(s.z_b as i32))
        .collect();
    Ok(mean_with_ci(&values, states.iter().filter(|s| s.truncated).count()))
}

/// Sample means of `Z_A(t)` and `Z_B(t)`.
pub fn estimate_moments(
    params: &ModelParams,
    t: f64,
    replicates: usize,
    seed: u64,
) -> Result<(EstimateWithCI, EstimateWithCI)> {
    check_replicates(replicates)?;
    let states = sample_final_states(params, t, replicates, seed, &Caps::default())?;
    let truncated = states.iter().filter(|s| s.truncated).count();
    let za: Vec<f64> = states.iter().map(|s| s.z_a as f64).collect();
    let zb: Vec<f64> = states.iter().map(|s| s.z_b as f64).collect();
    Ok((mean_with_ci(&za, truncated), mean_with_ci(&zb, truncated)))
}
