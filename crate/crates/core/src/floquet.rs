//! Exact dressed (Floquet) states of a spin in a circularly polarized field.
//!
//! The field `H(t) = H0 (cos ω0t, h·sin ω0t, 0)` couples through
//! `Ĥ0 = μB σ·H`, which in the `{|ψ+⟩, |ψ−⟩}` basis reads
//!
//! ```text
//! Ĥ0(t) = μB H0 [[0, e^{-ihω0t}], [e^{ihω0t}, 0]]
//! ```
//!
//! with helicity `h = ±1`. Everything here is evaluated in reduced units
//! (frequencies in units of ω0, time as the phase ω0t) and converted back
//! to rad/s and eV at the boundary. Counter-clockwise helicity is the same
//! algebra with ω0 replaced by −ω0; [`DriveField`] itself always stores a
//! positive frequency.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::spinor::{mat_vec, Matrix2, Spinor};
use crate::units::{self, HBAR_EV_S, MU_B_EV_PER_T, GAUSS_PER_TESLA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Helicity {
    /// Angular momentum along +z; the default.
    #[default]
    #[serde(rename = "clockwise", alias = "+1")]
    Clockwise,
    #[serde(rename = "counterclockwise", alias = "-1")]
    CounterClockwise,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Clockwise => 1.0,
            Helicity::CounterClockwise => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Helicity::Clockwise => Helicity::CounterClockwise,
            Helicity::CounterClockwise => Helicity::Clockwise,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Helicity::Clockwise),
            -1 => Ok(Helicity::CounterClockwise),
            other => Err(domain(format!("helicity must be +1 or -1, got {other}"))),
        }
    }
}

/// Circularly polarized drive: amplitude in gauss, angular frequency in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveField {
    h0_gauss: f64,
    omega0: f64,
    helicity: Helicity,
}

impl DriveField {
    pub fn new(h0_gauss: f64, omega0: f64, helicity: Helicity) -> Result<Self> {
        // validates both arguments
        units::reduced_drive_strength(h0_gauss, omega0)?;
        Ok(Self {
            h0_gauss,
            omega0,
            helicity,
        })
    }

    /// Field specified by its reduced strength `x = 2μB H0 / ħω0`.
    pub fn from_reduced(x: f64, omega0: f64, helicity: Helicity) -> Result<Self> {
        Self::new(units::field_for_drive_strength(x, omega0)?, omega0, helicity)
    }

    pub fn h0_gauss(&self) -> f64 {
        self.h0_gauss
    }

    pub fn h0_tesla(&self) -> f64 {
        self.h0_gauss / GAUSS_PER_TESLA
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn helicity(&self) -> Helicity {
        self.helicity
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega0
    }

    pub fn photon_energy_ev(&self) -> f64 {
        self.omega0 * HBAR_EV_S
    }

    pub fn reduced_strength(&self) -> f64 {
        units::reduced_drive_strength(self.h0_gauss, self.omega0)
            .expect("validated at construction")
    }

    pub fn with_helicity(&self, helicity: Helicity) -> Self {
        Self { helicity, ..*self }
    }

    /// Coupling energy `μB H0` in eV.
    pub fn coupling_ev(&self) -> f64 {
        MU_B_EV_PER_T * self.h0_tesla()
    }

    /// Hamiltonian in eV at reduced time `theta = ω0 t`.
    pub(crate) fn hamiltonian_reduced(&self, theta: f64) -> Matrix2 {
        let v = self.coupling_ev();
        let (sin, cos) = (self.helicity.sign() * theta).sin_cos();
        let zero = C64::new(0.0, 0.0);
        [
            [zero, C64::new(v * cos, -v * sin)],
            [C64::new(v * cos, v * sin), zero],
        ]
    }
}

/// `(H, Ĥ0)` at time `t`: the field vector in gauss and the interaction
/// Hamiltonian in eV.
pub fn drive_field_at(field: &DriveField, t: f64) -> ([f64; 3], Matrix2) {
    let theta = field.omega0 * t;
    let (sin, cos) = (field.helicity.sign() * theta).sin_cos();
    let h = [field.h0_gauss * cos, field.h0_gauss * sin, 0.0];
    (h, field.hamiltonian_reduced(theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DressedState {
    Ground,
    Excited,
}

/// Closed-form Floquet solution for one drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloquetSolution {
    pub field: DriveField,
    /// `2μB H0 / ħω0`
    pub x: f64,
    /// Generalized frequency `Ω = √((2μB H0/ħ)² + ω0²)`, rad/s.
    pub omega: f64,
    /// Splitting `Ω0 = Ω − hω0`, rad/s.
    pub omega_split: f64,
    /// Quasienergies in eV.
    pub eps_g: f64,
    pub eps_e: f64,
    /// `√((Ω + hω0)/2Ω)`
    pub a: f64,
    /// `√((Ω − hω0)/2Ω)`
    pub b: f64,
}

pub fn solve_floquet(field: &DriveField) -> FloquetSolution {
    let x = field.reduced_strength();
    let s = field.helicity.sign();
    let r = x.hypot(1.0);
    // r - 1 and (r - 1)/2r without cancellation at small x
    let (split, b2) = if s > 0.0 {
        let d = x * x / (r + 1.0);
        (d, d / (2.0 * r))
    } else {
        (r + 1.0, (r + 1.0) / (2.0 * r))
    };
    let a2 = 1.0 - b2;
    let w0 = field.omega0;
    let e0 = field.photon_energy_ev();
    FloquetSolution {
        field: *field,
        x,
        omega: r * w0,
        omega_split: split * w0,
        eps_g: -0.5 * split * e0,
        eps_e: 0.5 * split * e0,
        a: a2.sqrt(),
        b: b2.sqrt(),
    }
}

impl FloquetSolution {
    /// `Ω / ω0`
    pub fn omega_ratio(&self) -> f64 {
        self.x.hypot(1.0)
    }

    /// `Ω0 / ω0`
    pub fn split_ratio(&self) -> f64 {
        self.omega_split / self.field.omega0
    }

    /// Rabi amplitude `2μB H0 / ħΩ`; its square is the maximal flip
    /// probability of the undamped evolution.
    pub fn rabi_amplitude(&self) -> f64 {
        self.x / self.omega_ratio()
    }

    /// Signed detuning ratio `hω0 / Ω`.
    pub fn detuning_ratio(&self) -> f64 {
        self.field.helicity.sign() / self.omega_ratio()
    }

    /// Splitting `ħΩ0` in eV.
    pub fn splitting_ev(&self) -> f64 {
        self.eps_e - self.eps_g
    }

    /// Frequency of the photon emitted in the excited → ground transition,
    /// `Ω − ω0`, and the amplitude factor `(Ω + ω0)/Ω` of the emission matrix
    /// element. Both are helicity independent: reversing the helicity is a
    /// rotation by π about x, which relabels the spin states but leaves the
    /// physical spectrum untouched.
    pub fn emission_parameters(&self) -> (f64, f64) {
        let x = self.x;
        let r = self.omega_ratio();
        let split = x * x / (r + 1.0);
        (split * self.field.omega0, (r + 1.0) / r)
    }

    fn phases(&self, which: DressedState) -> (C64, f64, C64, f64) {
        // (amplitude, phase rate) per component, phases in units of ω0 t
        let s = self.field.helicity.sign();
        let r = self.omega_ratio();
        match which {
            DressedState::Ground => (
                C64::new(self.a, 0.0),
                0.5 * (r - s),
                C64::new(-self.b, 0.0),
                0.5 * (r + s),
            ),
            DressedState::Excited => (
                C64::new(self.b, 0.0),
                -0.5 * (r + s),
                C64::new(self.a, 0.0),
                -0.5 * (r - s),
            ),
        }
    }

    pub(crate) fn state_reduced(&self, which: DressedState, theta: f64) -> Spinor {
        let (ap, wp, am, wm) = self.phases(which);
        Spinor::new(ap * C64::cis(wp * theta), am * C64::cis(wm * theta))
    }
}

/// `|ψ_g(t)⟩` or `|ψ_e(t)⟩`, including the quasienergy phase.
pub fn floquet_state(sol: &FloquetSolution, which: DressedState, t: f64) -> Spinor {
    sol.state_reduced(which, sol.field.omega0 * t)
}

/// `‖iħ∂t|ψ⟩ − Ĥ0(t)|ψ⟩‖` in eV, with the time derivative taken analytically.
pub fn schrodinger_residual(sol: &FloquetSolution, which: DressedState, t: f64) -> f64 {
    let theta = sol.field.omega0 * t;
    let psi = sol.state_reduced(which, theta);
    let (_, wp, _, wm) = sol.phases(which);
    let e0 = sol.field.photon_energy_ev();
    // iħ d/dt (a e^{iwθ}) = -ħω0 w (a e^{iwθ})
    let lhs = Spinor::new(psi.plus * (-wp * e0), psi.minus * (-wm * e0));
    let rhs = mat_vec(&sol.field.hamiltonian_reduced(theta), &psi);
    lhs.sub(&rhs).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ev_to_rad_per_s;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn field(x: f64, h: Helicity) -> DriveField {
        DriveField::from_reduced(x, ev_to_rad_per_s(1.0), h).unwrap()
    }

    #[test]
    fn field_vector_examples() {
        let f = DriveField::new(2.5e4, 3.0e12, Helicity::Clockwise).unwrap();
        let (h, _) = drive_field_at(&f, 0.0);
        assert_eq!(h, [2.5e4, 0.0, 0.0]);
        let (h, _) = drive_field_at(&f, PI / (2.0 * f.omega0()));
        assert!(h[0].abs() < 1e-12 * 2.5e4 && (h[1] - 2.5e4).abs() < 1e-12 * 2.5e4);
        let (h, _) = drive_field_at(&f.with_helicity(Helicity::CounterClockwise), PI / (2.0 * f.omega0()));
        assert!((h[1] + 2.5e4).abs() < 1e-12 * 2.5e4);
    }

    #[test]
    fn hamiltonian_is_traceless_hermitian_with_constant_spectrum() {
        let f = field(0.75, Helicity::Clockwise);
        let v = f.coupling_ev();
        for k in 0..50 {
            let t = k as f64 * 0.37e-15;
            let (h, m) = drive_field_at(&f, t);
            let mag = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
            assert!((mag - f.h0_gauss()).abs() < 1e-12 * f.h0_gauss());
            assert_eq!(m[0][0] + m[1][1], C64::new(0.0, 0.0));
            assert!((m[0][1] - m[1][0].conj()).norm() < 1e-18);
            // eigenvalues ±|m01| for a traceless hermitian off-diagonal matrix
            assert!((m[0][1].norm() - v).abs() < 1e-12 * v);
        }
    }

    #[test]
    fn zero_field_is_degenerate() {
        let sol = solve_floquet(&field(0.0, Helicity::Clockwise));
        assert_eq!(sol.omega, sol.field.omega0());
        assert_eq!(sol.omega_split, 0.0);
        assert_eq!((sol.eps_g, sol.eps_e), (0.0, 0.0));
        assert_eq!((sol.a, sol.b), (1.0, 0.0));
    }

    #[test]
    fn three_quarter_drive() {
        let sol = solve_floquet(&field(0.75, Helicity::Clockwise));
        let w0 = ev_to_rad_per_s(1.0);
        assert!((sol.omega / w0 - 1.25).abs() < 1e-12);
        assert!((sol.splitting_ev() - 0.25).abs() < 1e-12);
        assert!((sol.a - 0.9f64.sqrt()).abs() < 1e-12);
        assert!((sol.b - 0.1f64.sqrt()).abs() < 1e-12);
        assert!((sol.a * sol.a + sol.b * sol.b - 1.0).abs() < 1e-12);
        assert_eq!(sol.eps_g, -sol.eps_e);
    }

    #[test]
    fn states_at_origin() {
        let sol = solve_floquet(&field(0.75, Helicity::Clockwise));
        let g = floquet_state(&sol, DressedState::Ground, 0.0);
        let e = floquet_state(&sol, DressedState::Excited, 0.0);
        assert_eq!(g, Spinor::new(C64::new(sol.a, 0.0), C64::new(-sol.b, 0.0)));
        assert_eq!(e, Spinor::new(C64::new(sol.b, 0.0), C64::new(sol.a, 0.0)));
    }

    #[test]
    fn residual_vanishes_without_field() {
        let sol = solve_floquet(&field(0.0, Helicity::Clockwise));
        for t in [0.0, 1e-15, 3.3e-13] {
            assert_eq!(schrodinger_residual(&sol, DressedState::Ground, t), 0.0);
            assert_eq!(schrodinger_residual(&sol, DressedState::Excited, t), 0.0);
        }
    }

    #[test]
    fn residual_is_periodic() {
        let sol = solve_floquet(&field(0.75, Helicity::Clockwise));
        let period = sol.field.period();
        for which in [DressedState::Ground, DressedState::Excited] {
            for t in [0.1e-15, 1.7e-15, 2.9e-14] {
                let a = schrodinger_residual(&sol, which, t);
                let b = schrodinger_residual(&sol, which, t + period);
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn helicity_maps_quasienergies() {
        let cw = solve_floquet(&field(1.3, Helicity::Clockwise));
        let ccw = solve_floquet(&field(1.3, Helicity::CounterClockwise));
        let r = cw.omega_ratio();
        // eps_g = ħ(hω0 - Ω)/2
        assert!((cw.eps_g - 0.5 * (1.0 - r)).abs() < 1e-12);
        assert!((ccw.eps_g - 0.5 * (-1.0 - r)).abs() < 1e-12);
        assert_eq!(cw.a, ccw.b);
        assert!((cw.b - ccw.a).abs() < 1e-15);
        // same physical emission parameters
        assert_eq!(cw.emission_parameters(), ccw.emission_parameters());
        let z = solve_floquet(&field(0.0, Helicity::CounterClockwise));
        assert_eq!(z.emission_parameters().0, 0.0);
    }

    #[test]
    fn splitting_increases_with_field() {
        let mut last = -1.0;
        for k in 0..200 {
            let sol = solve_floquet(&field(k as f64 * 0.05, Helicity::Clockwise));
            assert!(sol.omega_split > last);
            last = sol.omega_split;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn dressed_state_invariants(x in 0.0f64..5.0, ccw: bool, seed in 0u64..1000) {
            let h = if ccw { Helicity::CounterClockwise } else { Helicity::Clockwise };
            let sol = solve_floquet(&field(x, h));
            prop_assert!((sol.a * sol.a + sol.b * sol.b - 1.0).abs() < 1e-12);
            prop_assert!(sol.omega >= sol.field.omega0());
            prop_assert!(sol.omega_split >= 0.0);
            prop_assert!((sol.splitting_ev() - sol.omega_split * HBAR_EV_S).abs() < 1e-12 * sol.splitting_ev().max(1e-300));
            let e_scale = sol.omega * HBAR_EV_S;
            // deterministic pseudo-random times spanning many periods
            let mut t = seed as f64 * 1.234_567e-16;
            for _ in 0..100 {
                t = (t * 7.919 + 3.1e-15) % 1e-12;
                let g = floquet_state(&sol, DressedState::Ground, t);
                let e = floquet_state(&sol, DressedState::Excited, t);
                prop_assert!((g.norm() - 1.0).abs() < 1e-12);
                prop_assert!((e.norm() - 1.0).abs() < 1e-12);
                prop_assert!(g.inner(&e).norm() < 1e-12);
                prop_assert!(schrodinger_residual(&sol, DressedState::Ground, t) < 1e-10 * e_scale);
                prop_assert!(schrodinger_residual(&sol, DressedState::Excited, t) < 1e-10 * e_scale);
            }
        }
    }
}
