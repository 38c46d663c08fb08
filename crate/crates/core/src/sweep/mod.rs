//! Two-dimensional `(H0, τ0)` sweeps of the flip probabilities.

mod config;
mod output;

pub use config::{OutputFormat, Spacing, SweepConfig, MAX_GRID_POINTS};
pub use output::{read_csv, read_json, write_outputs, write_table, Metadata, SweepDocument, COLUMNS};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decay::{applicability_check, decay_rate, DecayModel, Verdict, DEFAULT_APPLICABILITY_THRESHOLD};
use crate::error::{Error, Result};
use crate::floquet::{DriveField, Helicity};
use crate::pulse::{flip_anisotropy, flip_probability, induced_spin, PulseSpec};
use crate::spinor::SpinState;

/// One grid point. `H0` in gauss, `tau0` in s, frequencies in rad/s,
/// `Gamma` in 1/s, `S_z` in units of ħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SweepRow {
    pub H0: f64,
    pub tau0: f64,
    pub x: f64,
    pub Omega: f64,
    pub Omega0: f64,
    pub Gamma: f64,
    pub W_minus: f64,
    pub W_plus: f64,
    pub Delta_W: f64,
    pub S_z: f64,
}

impl SweepRow {
    pub fn values(&self) -> [f64; 10] {
        [
            self.H0, self.tau0, self.x, self.Omega, self.Omega0, self.Gamma, self.W_minus, self.W_plus,
            self.Delta_W, self.S_z,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub config: Value,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl SweepTable {
    pub fn empty(config: Value, seed: u64) -> Self {
        Self {
            rows: Vec::new(),
            config,
            seed,
            warnings: Vec::new(),
        }
    }
}

/// Evaluates one grid point from the closed forms.
pub fn evaluate_point(
    h0_gauss: f64,
    tau0: f64,
    omega0: f64,
    helicity: Helicity,
    decay: DecayModel,
    n_spins: u64,
) -> Result<SweepRow> {
    let field = DriveField::new(h0_gauss, omega0, helicity)?;
    let pulse = PulseSpec::new(field, tau0)?;
    let sol = pulse.solve();
    let gamma = decay_rate(&sol, decay);
    let w_minus = flip_probability(&pulse, gamma, SpinState::Minus);
    let w_plus = flip_probability(&pulse, gamma, SpinState::Plus);
    // the direct form keeps ΔW accurate when Γτ0 is far below the rounding of W∓
    let delta_w = flip_anisotropy(&pulse, gamma);
    Ok(SweepRow {
        H0: h0_gauss,
        tau0,
        x: sol.x,
        Omega: sol.omega,
        Omega0: sol.omega_split,
        Gamma: gamma,
        W_minus: w_minus,
        W_plus: w_plus,
        Delta_W: delta_w,
        S_z: induced_spin(n_spins, delta_w)?,
    })
}

/// Evaluates every grid point, `H0` outer and `τ0` inner. The row order and
/// contents do not depend on the thread count.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepTable> {
    let mut warnings = Vec::new();
    if let DecayModel::Phenomenological { tau_s } = config.decay {
        let check = applicability_check(config.omega0, tau_s, DEFAULT_APPLICABILITY_THRESHOLD);
        if check.verdict == Verdict::Warn {
            warnings.push(format!(
                "ω0·τs = {:e} is below {}; the two-scenario treatment assumes many drive periods per relaxation time",
                check.product, check.threshold
            ));
        }
    }

    let n_tau = config.tau0_s.len();
    let eval = |i: usize| {
        evaluate_point(
            config.h0_gauss[i / n_tau],
            config.tau0_s[i % n_tau],
            config.omega0,
            config.helicity,
            config.decay,
            config.n_spins,
        )
    };
    let rows: Result<Vec<SweepRow>> = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(|| (0..config.points()).into_par_iter().map(eval).collect()),
        None => (0..config.points()).into_par_iter().map(eval).collect(),
    };

    Ok(SweepTable {
        rows: rows?,
        config: config.source.clone(),
        seed: config.seed,
        warnings,
    })
}
