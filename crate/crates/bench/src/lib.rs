//! Shared inputs for the benchmarks.

use spinfloquet::units::ev_to_rad_per_s;
use spinfloquet::{DriveField, Helicity, PulseSpec, SweepConfig};

pub fn field(x: f64) -> DriveField {
    DriveField::from_reduced(x, ev_to_rad_per_s(1.0), Helicity::Clockwise).expect("valid drive")
}

/// Pulse of Rabi angle `Ωτ0 = angle` at 1 eV.
pub fn pulse(x: f64, angle: f64) -> PulseSpec {
    let f = field(x);
    PulseSpec::new(f, angle / (x.hypot(1.0) * f.omega0())).expect("positive duration")
}

/// An `n × n` radiative sweep at 1 eV.
pub fn square_sweep(n: usize) -> SweepConfig {
    SweepConfig::from_json_str(&format!(
        r#"{{
            "photon_energy": "1 eV",
            "h0": {{"unit": "T", "min": 0, "max": 6500, "count": {n}}},
            "tau0": {{"unit": "s", "min": 1e-16, "max": 1e2, "count": {n}, "spacing": "log"}},
            "threads": 1
        }}"#
    ))
    .expect("valid config")
}
