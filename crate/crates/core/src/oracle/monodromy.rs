use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::integrator::{propagate, IntegratorSettings};
use crate::error::Result;
use crate::floquet::DriveField;
use crate::spinor::{Matrix2, Spinor};

/// Quasienergies from the eigenphases of the one-period propagator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quasienergies {
    /// eV, each in `(−ħω0/2, ħω0/2]`, `eps_a ≤ eps_b`.
    pub eps_a: f64,
    pub eps_b: f64,
    /// `max |(U†U − 1)ᵢⱼ|`
    pub unitarity_error: f64,
    /// Sum of eigenphases reduced to `(−π, π]`.
    pub phase_sum: f64,
}

impl Quasienergies {
    /// `(ε_b − ε_a) mod ħω0`, in `[0, ħω0)`.
    pub fn splitting(&self, photon_energy_ev: f64) -> f64 {
        (self.eps_b - self.eps_a).rem_euclid(photon_energy_ev)
    }
}

/// Distance between `a` and `b` on the circle of circumference `period`.
pub fn mod_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// `U(T)` built column by column from the integrated basis states.
pub fn monodromy_matrix(field: &DriveField, settings: &IntegratorSettings) -> Result<Matrix2> {
    let span = (0.0, field.period());
    let up = propagate(field, Spinor::up(), span, settings)?;
    let down = propagate(field, Spinor::down(), span, settings)?;
    Ok([[up.plus, down.plus], [up.minus, down.minus]])
}

fn unitarity_error(u: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let dot = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

pub fn quasienergies_from_monodromy(
    field: &DriveField,
    settings: &IntegratorSettings,
) -> Result<Quasienergies> {
    let u = monodromy_matrix(field, settings)?;
    let half_trace = 0.5 * (u[0][0] + u[1][1]);
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let root = (half_trace * half_trace - det).sqrt();
    let quantum = field.photon_energy_ev();
    // λ = e^{−iεT/ħ} = e^{−2πiε/ħω0}
    let eps = |lambda: C64| {
        let e = -lambda.arg() / TAU * quantum;
        if e <= -0.5 * quantum {
            e + quantum
        } else {
            e
        }
    };
    let (e1, e2) = (eps(half_trace + root), eps(half_trace - root));
    Ok(Quasienergies {
        eps_a: e1.min(e2),
        eps_b: e1.max(e2),
        unitarity_error: unitarity_error(&u),
        phase_sum: wrap_phase((half_trace + root).arg() + (half_trace - root).arg()),
    })
}
