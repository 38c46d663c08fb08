use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::floquet::DriveField;
use crate::pulse::PulseSpec;
use crate::spinor::{SpinState, Spinor};

/// Tolerances of the embedded Dormand–Prince 5(4) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest step as a fraction of the drive period.
    pub max_step: f64,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: 0.05,
        }
    }
}

impl IntegratorSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_step: f64) -> Result<Self> {
        let s = Self {
            rel_tol,
            abs_tol,
            max_step,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(domain(format!("{name} must lie in (0, 1e-3], got {tol}")));
            }
        }
        if !(self.max_step > 0.0 && self.max_step <= 0.1) {
            return Err(domain(format!(
                "max_step must lie in (0, 0.1] periods, got {}",
                self.max_step
            )));
        }
        Ok(())
    }

    /// Both tolerances halved.
    pub fn tightened(&self) -> Self {
        Self {
            rel_tol: 0.5 * self.rel_tol,
            abs_tol: 0.5 * self.abs_tol,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Sample times in s, one per accepted step including both ends.
    pub times: Vec<f64>,
    pub spinors: Vec<Spinor>,
    /// `max |‖ψ‖ − 1|` over the samples.
    pub norm_drift: f64,
}

impl Trajectory {
    pub const ACCEPTED_NORM_DRIFT: f64 = 1e-9;

    pub fn is_accepted(&self) -> bool {
        self.norm_drift < Self::ACCEPTED_NORM_DRIFT
    }

    pub fn last(&self) -> Spinor {
        *self.spinors.last().expect("trajectory holds the initial state")
    }
}

type State = [C64; 2];

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth- minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Right-hand side `dψ/dθ = −i Ĥ0(θ)/(ħω0) ψ` in reduced time `θ = ω0 t`.
struct Rhs<'a> {
    field: &'a DriveField,
    inv_quantum: f64,
}

impl<'a> Rhs<'a> {
    fn new(field: &'a DriveField) -> Self {
        Self {
            field,
            inv_quantum: 1.0 / field.photon_energy_ev(),
        }
    }

    /// Largest matrix element of `Ĥ0/ħω0`.
    fn scale(&self) -> f64 {
        self.field.coupling_ev() * self.inv_quantum
    }

    fn eval(&self, theta: f64, y: &State) -> State {
        let m = self.field.hamiltonian_reduced(theta);
        let k = C64::new(0.0, -self.inv_quantum);
        [
            k * (m[0][0] * y[0] + m[0][1] * y[1]),
            k * (m[1][0] * y[0] + m[1][1] * y[1]),
        ]
    }
}

fn combine(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

fn to_state(s: &Spinor) -> State {
    [s.plus, s.minus]
}

fn to_spinor(y: &State) -> Spinor {
    Spinor::new(y[0], y[1])
}

fn check_inputs(psi0: &Spinor, t_span: (f64, f64), settings: &IntegratorSettings) -> Result<()> {
    settings.validate()?;
    if !(t_span.0.is_finite() && t_span.1.is_finite() && t_span.1 >= t_span.0) {
        return Err(domain(format!("time span must be finite and ordered, got {t_span:?}")));
    }
    if (psi0.norm() - 1.0).abs() > 1e-12 {
        return Err(domain(format!("initial spinor must be normalized, norm = {}", psi0.norm())));
    }
    Ok(())
}

/// Adaptive integration of `iħ∂tψ = Ĥ0(t)ψ` over `t_span` (seconds).
/// The norm is never corrected; its drift is reported.
pub fn integrate_tdse(
    field: &DriveField,
    psi0: Spinor,
    t_span: (f64, f64),
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    let mut times = vec![t_span.0];
    let mut spinors = vec![psi0];
    run(field, psi0, t_span, settings, |t, y| {
        times.push(t);
        spinors.push(to_spinor(y));
    })?;
    let norm_drift = spinors
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Trajectory {
        times,
        spinors,
        norm_drift,
    })
}

/// Final spinor only, without storing the trajectory.
pub fn propagate(
    field: &DriveField,
    psi0: Spinor,
    t_span: (f64, f64),
    settings: &IntegratorSettings,
) -> Result<Spinor> {
    let mut last = psi0;
    run(field, psi0, t_span, settings, |_, y| last = to_spinor(y))?;
    Ok(last)
}

/// Decay-free flip probability obtained by integrating through the pulse.
pub fn tdse_flip_probability(
    pulse: &PulseSpec,
    initial: SpinState,
    settings: &IntegratorSettings,
) -> Result<f64> {
    let end = propagate(&pulse.field, Spinor::basis(initial), (0.0, pulse.tau0()), settings)?;
    Ok(end.probability(initial.flipped()))
}

fn run(
    field: &DriveField,
    psi0: Spinor,
    t_span: (f64, f64),
    settings: &IntegratorSettings,
    mut on_step: impl FnMut(f64, &State),
) -> Result<()> {
    check_inputs(&psi0, t_span, settings)?;
    let w0 = field.omega0();
    let rhs = Rhs::new(field);
    let (th0, th1) = (t_span.0 * w0, t_span.1 * w0);
    if th1 == th0 {
        return Ok(());
    }
    let h_max = settings.max_step * std::f64::consts::TAU;
    let mut theta = th0;
    let mut y = to_state(&psi0);
    let mut k1 = rhs.eval(theta, &y);
    let mut h = h_max.min(th1 - th0).min(0.01 / rhs.scale().max(1e-300));
    let mut rejected_in_a_row = 0u32;

    while theta < th1 {
        let last_step = theta + h >= th1;
        if last_step {
            h = th1 - theta;
        }
        let k2 = rhs.eval(theta + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs.eval(theta + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs.eval(
            theta + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs.eval(
            theta + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs.eval(
            theta + h,
            &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combine(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let t_new = if last_step { th1 } else { theta + h };
        let k7 = rhs.eval(t_new, &y_new);

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = settings.abs_tol + settings.rel_tol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.re.abs() / scale).max(e.im.abs() / scale);
        }

        if err <= 1.0 {
            theta = t_new;
            y = y_new;
            k1 = k7;
            on_step(theta / w0, &y);
            rejected_in_a_row = 0;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
            h = (h * grow).min(h_max);
        } else {
            rejected_in_a_row += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
        if !h.is_finite() || h <= 1e-14 * theta.abs().max(1.0) || rejected_in_a_row > 50 {
            return Err(Error::Integration {
                last_good_time: theta / w0,
                reason: format!("step size collapsed to {h:e} rad"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{floquet_state, solve_floquet, DressedState, Helicity};
    use crate::pulse::flip_probability;
    use crate::units::ev_to_rad_per_s;
    use proptest::prelude::*;

    fn field(x: f64, h: Helicity) -> DriveField {
        DriveField::from_reduced(x, ev_to_rad_per_s(1.0), h).unwrap()
    }

    #[test]
    fn settings_are_validated() {
        assert!(IntegratorSettings::default().validate().is_ok());
        assert!(IntegratorSettings::new(0.0, 1e-12, 0.05).is_err());
        assert!(IntegratorSettings::new(1e-2, 1e-12, 0.05).is_err());
        assert!(IntegratorSettings::new(1e-8, 1e-10, 0.2).is_err());
        assert!(IntegratorSettings::new(1e-3, 1e-3, 0.1).is_ok());
    }

    #[test]
    fn zero_field_is_stationary() {
        let f = field(0.0, Helicity::Clockwise);
        let traj = integrate_tdse(&f, Spinor::up(), (0.0, 20.0 * f.period()), &Default::default()).unwrap();
        for s in &traj.spinors {
            assert_eq!(*s, Spinor::up());
        }
    }

    #[test]
    fn half_rabi_cycle_flips_with_rabi_probability() {
        let f = field(0.75, Helicity::Clockwise);
        let omega = 1.25 * f.omega0();
        let pulse = PulseSpec::new(f, std::f64::consts::PI / omega).unwrap();
        let p = tdse_flip_probability(&pulse, SpinState::Minus, &Default::default()).unwrap();
        assert!((p - 0.36).abs() < 1e-8, "{p}");
    }

    #[test]
    fn floquet_state_is_preserved_for_fifty_periods() {
        for h in [Helicity::Clockwise, Helicity::CounterClockwise] {
            let f = field(0.75, h);
            let sol = solve_floquet(&f);
            let psi0 = floquet_state(&sol, DressedState::Ground, 0.0);
            let traj = integrate_tdse(&f, psi0, (0.0, 50.0 * f.period()), &Default::default()).unwrap();
            assert!(traj.is_accepted());
            for (t, s) in traj.times.iter().zip(&traj.spinors) {
                let exact = floquet_state(&sol, DressedState::Ground, *t);
                assert!((exact.inner(s).norm() - 1.0).abs() < 1e-8, "t = {t}");
            }
        }
    }

    #[test]
    fn norm_drift_stays_small_for_strong_drive() {
        for x in [0.1, 1.0, 5.0] {
            let f = field(x, Helicity::Clockwise);
            let traj = integrate_tdse(&f, Spinor::down(), (0.0, 100.0 * f.period()), &Default::default()).unwrap();
            assert!(traj.is_accepted(), "x = {x}: {}", traj.norm_drift);
        }
    }

    #[test]
    fn halving_tolerances_barely_moves_the_result() {
        let f = field(2.0, Helicity::CounterClockwise);
        let s = IntegratorSettings::new(1e-9, 1e-11, 0.05).unwrap();
        let a = propagate(&f, Spinor::down(), (0.0, 7.3 * f.period()), &s).unwrap();
        let b = propagate(&f, Spinor::down(), (0.0, 7.3 * f.period()), &s.tightened()).unwrap();
        assert!(a.sub(&b).norm() < 10.0 * s.rel_tol);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = field(1.0, Helicity::Clockwise);
        let s = IntegratorSettings::default();
        assert!(integrate_tdse(&f, Spinor::up().scale(C64::new(2.0, 0.0)), (0.0, 1e-15), &s).is_err());
        assert!(integrate_tdse(&f, Spinor::up(), (0.0, f64::INFINITY), &s).is_err());
        assert!(integrate_tdse(&f, Spinor::up(), (1.0, 0.0), &s).is_err());
    }

    #[test]
    fn empty_span_returns_initial_state() {
        let f = field(1.0, Helicity::Clockwise);
        let traj = integrate_tdse(&f, Spinor::down(), (3e-15, 3e-15), &Default::default()).unwrap();
        assert_eq!(traj.spinors, vec![Spinor::down()]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn agrees_with_rabi_closed_form(x in 0.0f64..5.0, angle in 0.01f64..20.0, ccw in any::<bool>()) {
            let h = if ccw { Helicity::CounterClockwise } else { Helicity::Clockwise };
            let f = field(x, h);
            let omega = (1.0 + x * x).sqrt() * f.omega0();
            let pulse = PulseSpec::new(f, angle / omega).unwrap();
            for initial in [SpinState::Minus, SpinState::Plus] {
                let p = tdse_flip_probability(&pulse, initial, &Default::default()).unwrap();
                prop_assert!((p - flip_probability(&pulse, 0.0, initial)).abs() < 1e-8);
            }
        }
    }
}
