//! Decay of the dressed excited state.
//!
//! Two sources for the rate: the radiative (magnetic dipole, vacuum
//! emission) constant, and a phenomenological `1/τs` for materials where
//! non-radiative spin relaxation dominates. The numerical check of the
//! Markovian reduction lives in [`crate::kernel`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::floquet::FloquetSolution;
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayModel {
    #[default]
    Radiative,
    /// Spin relaxation time `tau_s` in seconds.
    Phenomenological { tau_s: f64 },
}

impl DecayModel {
    pub fn phenomenological(tau_s: f64) -> Result<Self> {
        if !(tau_s.is_finite() && tau_s > 0.0) {
            return Err(domain(format!("tau_s must be positive, got {tau_s}")));
        }
        Ok(DecayModel::Phenomenological { tau_s })
    }
}

/// Decay rate Γ of the dressed excited state, 1/s.
///
/// Radiative: `Γ = 2μB²Ω0³/(3ħc³) · ((Ω+ω0)/Ω)²`, evaluated with the
/// physical emission frequency so that both helicities decay alike.
pub fn decay_rate(sol: &FloquetSolution, model: DecayModel) -> f64 {
    match model {
        DecayModel::Radiative => {
            let w0 = sol.field.omega0();
            let (split, amp) = sol.emission_parameters();
            let gamma_ref = units::reference_decay_rate(w0).expect("validated drive");
            gamma_ref * (split / w0).powi(3) * amp * amp
        }
        DecayModel::Phenomenological { tau_s } => 1.0 / tau_s,
    }
}

/// Probability `1 − e^{−Γt}` that a photon has been emitted by time `t`.
pub fn emission_probability(gamma: f64, t: f64) -> Result<f64> {
    if !(gamma >= 0.0 && t >= 0.0) {
        return Err(domain(format!(
            "decay rate and time must be non-negative, got Γ = {gamma}, t = {t}"
        )));
    }
    Ok(-(-gamma * t).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Applicability {
    /// `ω0 τs`
    pub product: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

pub const DEFAULT_APPLICABILITY_THRESHOLD: f64 = 100.0;

/// The two-scenario treatment assumes many drive periods per relaxation
/// time, `ω0 τs ≫ 1`.
pub fn applicability_check(omega0: f64, tau_s: f64, threshold: f64) -> Applicability {
    let product = omega0 * tau_s;
    Applicability {
        product,
        threshold,
        verdict: if product >= threshold {
            Verdict::Pass
        } else {
            Verdict::Warn
        },
    }
}
