use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::pulse::{branches, PulseSpec};
use crate::spinor::SpinState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub flips: u64,
    pub seed: u64,
}

/// Samples the two-scenario process trial by trial: emission with
/// probability `w`, then a flip with the probability of the branch taken.
///
/// Trial `i` draws from ChaCha8 stream `i` of `seed`, so the result does
/// not depend on how trials are scheduled across threads.
pub fn monte_carlo_flip(
    pulse: &PulseSpec,
    gamma: f64,
    initial: SpinState,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if trials == 0 {
        return Err(domain("at least one trial is required"));
    }
    let b = branches(pulse, gamma, initial)?;
    let flips: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let emitted = rng.gen::<f64>() < b.emission;
            let p = if emitted { b.flip_if_emitted } else { b.flip_if_coherent };
            u64::from(rng.gen::<f64>() < p)
        })
        .sum();
    let n = trials as f64;
    let estimate = flips as f64 / n;
    Ok(MonteCarloEstimate {
        estimate,
        std_error: (estimate * (1.0 - estimate) / n).sqrt(),
        trials,
        flips,
        seed,
    })
}
