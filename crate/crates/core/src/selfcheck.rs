//! Oracle equivalence suites: every closed form against an independent
//! numerical computation, each with its own tolerance.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decay::{decay_rate, DecayModel};
use crate::error::Result;
use crate::floquet::{schrodinger_residual, solve_floquet, DressedState, DriveField, Helicity};
use crate::kernel::{memory_kernel_evolution, uniform_grid, DEFAULT_CUTOFF_RATIO};
use crate::oracle::{
    mod_distance, monte_carlo_flip, quasienergies_from_monodromy, tdse_flip_probability, IntegratorSettings,
};
use crate::pulse::{flip_anisotropy, flip_probability, flip_result, reverse_helicity, scenario_composition, PulseSpec};
use crate::spinor::SpinState;
use crate::units::{ev_to_rad_per_s, reference_decay_rate};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// γ_ref at 1 eV from a 30-digit hand evaluation, 1/s.
pub const GAMMA_REF_1EV_HAND: f64 = 7.076_333_575_230_212;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation, in the units of `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn timed(
    name: &'static str,
    tolerance: f64,
    body: impl FnOnce() -> Result<(f64, String)>,
) -> SuiteResult {
    let start = Instant::now();
    let (passed, worst, detail) = match body() {
        Ok((worst, detail)) => (worst <= tolerance, worst, detail),
        Err(e) => (false, f64::INFINITY, format!("error: {e}")),
    };
    SuiteResult {
        name,
        passed,
        worst,
        tolerance,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn one_ev() -> f64 {
    ev_to_rad_per_s(1.0)
}

fn pulse_at(x: f64, angle: f64, helicity: Helicity) -> Result<PulseSpec> {
    let field = DriveField::from_reduced(x, one_ev(), helicity)?;
    PulseSpec::new(field, angle / (x.hypot(1.0) * field.omega0()))
}

fn helicity_from(flag: bool) -> Helicity {
    if flag {
        Helicity::CounterClockwise
    } else {
        Helicity::Clockwise
    }
}

/// Dressed states solve the Schrödinger equation: residual over `ħΩ` at 1000
/// random times per drive strength.
pub fn floquet_residual(seed: u64) -> SuiteResult {
    timed("floquet-residual", 1e-10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for x in [0.1, 0.75, 2.0, 5.0] {
            for h in [Helicity::Clockwise, Helicity::CounterClockwise] {
                let sol = solve_floquet(&DriveField::from_reduced(x, one_ev(), h)?);
                let scale = sol.omega_ratio() * sol.field.photon_energy_ev();
                for _ in 0..1000 {
                    let t = rng.gen_range(0.0..1e3) * sol.field.period();
                    for which in [DressedState::Ground, DressedState::Excited] {
                        worst = worst.max(schrodinger_residual(&sol, which, t) / scale);
                    }
                }
            }
        }
        Ok((worst, "max residual / ħΩ over 1000 times, x ∈ {0.1, 0.75, 2, 5}".into()))
    })
}

/// Quasienergies from the integrated one-period propagator.
pub fn quasienergy_oracle() -> SuiteResult {
    timed("quasienergy-monodromy", 1e-8, || {
        let settings = IntegratorSettings::default();
        let mut worst: f64 = 0.0;
        let mut unitarity: f64 = 0.0;
        let mut phase: f64 = 0.0;
        for i in 0..20 {
            let x = 5.0 * i as f64 / 19.0;
            for h in [Helicity::Clockwise, Helicity::CounterClockwise] {
                let field = DriveField::from_reduced(x, one_ev(), h)?;
                let sol = solve_floquet(&field);
                let q = quasienergies_from_monodromy(&field, &settings)?;
                let e0 = field.photon_energy_ev();
                let direct = mod_distance(q.eps_a, sol.eps_g, e0).max(mod_distance(q.eps_b, sol.eps_e, e0));
                let swapped = mod_distance(q.eps_a, sol.eps_e, e0).max(mod_distance(q.eps_b, sol.eps_g, e0));
                worst = worst.max(direct.min(swapped) / e0);
                unitarity = unitarity.max(q.unitarity_error);
                phase = phase.max(q.phase_sum.abs());
            }
        }
        // the propagator checks share this suite's verdict at their own tolerance
        let extra = if unitarity < 1e-10 && phase < 1e-10 { 0.0 } else { f64::INFINITY };
        Ok((
            worst + extra,
            format!("20 x in [0, 5], both helicities; unitarity {unitarity:.1e}, phase sum {phase:.1e}"),
        ))
    })
}

/// Decay-free flip probability: closed form against direct integration.
pub fn rabi_equivalence(seed: u64) -> SuiteResult {
    timed("rabi-tdse", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0003);
        let settings = IntegratorSettings::default();
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let x = rng.gen_range(0.0..5.0);
            let angle = rng.gen_range(0.0..4.0 * TAU);
            let h = helicity_from(rng.gen());
            let initial = if rng.gen() { SpinState::Plus } else { SpinState::Minus };
            let pulse = pulse_at(x, angle.max(1e-6), h)?;
            let numeric = tdse_flip_probability(&pulse, initial, &settings)?;
            worst = worst.max((numeric - flip_probability(&pulse, 0.0, initial)).abs());
        }
        Ok((worst, "200 random (x, Ωτ0), Γ = 0".into()))
    })
}

/// Branch-by-branch composition equals the closed form.
pub fn scenario_identity(seed: u64) -> SuiteResult {
    timed("scenario-composition", 1e-12, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0004);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let x = rng.gen_range(0.0..5.0);
            let angle = rng.gen_range(1e-3..50.0);
            let g_tau = rng.gen_range(0.0..10.0);
            for h in [Helicity::Clockwise, Helicity::CounterClockwise] {
                let pulse = pulse_at(x, angle, h)?;
                let gamma = g_tau / pulse.tau0();
                for initial in [SpinState::Minus, SpinState::Plus] {
                    let total = scenario_composition(&pulse, gamma, initial)?.total;
                    worst = worst.max((total - flip_probability(&pulse, gamma, initial)).abs());
                }
            }
        }
        Ok((worst, "10^4 random (x, Γτ0, Ωτ0), both initial states and helicities".into()))
    })
}

/// `ΔW = W− − W+`, vanishing without decay, non-negative for clockwise
/// drive, and helicity reversal swapping the two flip probabilities.
pub fn anisotropy_identities(seed: u64) -> SuiteResult {
    timed("anisotropy-identities", 1e-12, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0005);
        let mut difference: f64 = 0.0;
        let mut swap: f64 = 0.0;
        let mut violations = 0usize;
        for _ in 0..10_000 {
            let x = rng.gen_range(0.0..5.0);
            let angle = rng.gen_range(1e-3..50.0);
            let pulse = pulse_at(x, angle, Helicity::Clockwise)?;
            let gamma = rng.gen_range(0.0..10.0) / pulse.tau0();
            let r = flip_result(&pulse, gamma);
            difference = difference.max((r.delta_w - (r.w_minus - r.w_plus)).abs());
            if flip_anisotropy(&pulse, 0.0) != 0.0 || r.delta_w < 0.0 {
                violations += 1;
            }
            let rev = flip_result(&reverse_helicity(&pulse), gamma);
            swap = swap.max((rev.w_minus - r.w_plus).abs()).max((rev.w_plus - r.w_minus).abs());
        }
        // ΔW = W− − W+ is held to 1e-14, the reversal swap to 1e-12
        let worst = if difference <= 1e-14 && violations == 0 { swap } else { f64::INFINITY };
        Ok((
            worst,
            format!("|ΔW − (W−−W+)| ≤ {difference:.1e}, reversal swap ≤ {swap:.1e}, {violations} sign/zero violations"),
        ))
    })
}

/// Steps over `Γt ∈ [0, 3]` for the coarser of the two memory-kernel runs.
pub const WW_STEPS: usize = 80_000;

/// Survival amplitude from the memory-kernel equation at two step sizes.
pub fn weisskopf_wigner() -> SuiteResult {
    timed("weisskopf-wigner", 5e-2, || {
        let sol = solve_floquet(&DriveField::from_reduced(0.75, one_ev(), Helicity::Clockwise)?);
        let gamma = decay_rate(&sol, DecayModel::Radiative);
        let cutoff = DEFAULT_CUTOFF_RATIO * sol.emission_parameters().0;
        let t_end = 3.0 / gamma;
        let coarse = memory_kernel_evolution(&sol, cutoff, &uniform_grid(t_end, WW_STEPS))?;
        let fine = memory_kernel_evolution(&sol, cutoff, &uniform_grid(t_end, 2 * WW_STEPS))?;
        let mut worst: f64 = 0.0;
        for (t, p) in fine.times.iter().zip(fine.survival_probability()) {
            let exact = (-gamma * t).exp();
            worst = worst.max((p - exact).abs() / exact);
        }
        let mut change: f64 = 0.0;
        for (k, c) in coarse.amplitude.iter().enumerate() {
            change = change.max((c.norm_sqr() - fine.amplitude[2 * k].norm_sqr()).abs());
        }
        let worst = if change < 1e-4 { worst } else { f64::INFINITY };
        Ok((
            worst,
            format!("max |c_e|²/e^(−Γt) − 1 over Γt ∈ [0, 3]; halving Δt changes |c_e|² by {change:.1e}"),
        ))
    })
}

/// γ_ref at 1 eV against the committed hand calculation.
pub fn decay_constant() -> SuiteResult {
    timed("gamma-ref", 1e-3, || {
        let g = reference_decay_rate(one_ev())?;
        Ok((
            (g / GAMMA_REF_1EV_HAND - 1.0).abs(),
            format!("γ_ref(1 eV) = {g:.6} 1/s, hand value {GAMMA_REF_1EV_HAND:.6}"),
        ))
    })
}

/// Sampled two-scenario process against the closed form, in standard errors.
pub fn monte_carlo_consistency(seed: u64) -> SuiteResult {
    timed("monte-carlo", 4.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0008);
        let mut worst: f64 = 0.0;
        for set in 0..20u64 {
            let x = rng.gen_range(0.1..3.0);
            let angle = rng.gen_range(0.1..20.0);
            let g_tau = rng.gen_range(0.0..3.0);
            let pulse = pulse_at(x, angle, helicity_from(rng.gen()))?;
            let gamma = g_tau / pulse.tau0();
            for initial in [SpinState::Minus, SpinState::Plus] {
                let exact = flip_probability(&pulse, gamma, initial);
                let mc = monte_carlo_flip(&pulse, gamma, initial, 100_000, seed.wrapping_add(set))?;
                let sigma = (exact * (1.0 - exact) / 1e5).sqrt();
                let z = if sigma > 0.0 {
                    (mc.estimate - exact).abs() / sigma
                } else if mc.estimate == exact {
                    0.0
                } else {
                    f64::INFINITY
                };
                worst = worst.max(z);
            }
        }
        Ok((worst, "20 parameter sets × 2 initial states, N = 10^5".into()))
    })
}

/// All suites in order.
pub fn run_all(seed: u64) -> CheckReport {
    CheckReport {
        seed,
        suites: vec![
            floquet_residual(seed),
            quasienergy_oracle(),
            rabi_equivalence(seed),
            scenario_identity(seed),
            anisotropy_identities(seed),
            weisskopf_wigner(),
            decay_constant(),
            monte_carlo_consistency(seed),
        ],
    }
}
