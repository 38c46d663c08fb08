//! A single spin driven by a circularly polarized field: exact Floquet
//! dressed states, radiative or phenomenological decay of the dressed
//! excited state, spin flips induced by a rectangular pulse, and the
//! numerical oracles that check each closed form independently.
//!
//! ```
//! use spinfloquet::{decay_rate, flip_result, solve_floquet, DecayModel, DriveField, Helicity, PulseSpec};
//! use spinfloquet::units::ev_to_rad_per_s;
//!
//! let field = DriveField::from_reduced(0.75, ev_to_rad_per_s(1.0), Helicity::Clockwise)?;
//! let sol = solve_floquet(&field);
//! assert!((sol.omega_ratio() - 1.25).abs() < 1e-15);
//!
//! let gamma = decay_rate(&sol, DecayModel::Radiative);
//! let pulse = PulseSpec::new(field, 1.0 / gamma)?;
//! let w = flip_result(&pulse, gamma);
//! assert!(w.delta_w > 0.0);
//! # Ok::<(), spinfloquet::Error>(())
//! ```

pub mod decay;
pub mod error;
pub mod floquet;
pub mod kernel;
pub mod oracle;
pub mod pulse;
pub mod selfcheck;
mod special;
pub mod spinor;
pub mod sweep;
pub mod units;

pub use decay::{applicability_check, decay_rate, emission_probability, Applicability, DecayModel, Verdict};
pub use error::{Error, Result};
pub use floquet::{
    drive_field_at, floquet_state, schrodinger_residual, solve_floquet, DressedState, DriveField,
    FloquetSolution, Helicity,
};
pub use kernel::{memory_kernel_evolution, uniform_grid, SurvivalTrajectory};
pub use pulse::{
    evolve_through_pulse, flip_anisotropy, flip_probability, flip_result, induced_spin, reverse_helicity,
    scenario_composition, FlipResult, PulseEvolution, PulseSpec, ScenarioBreakdown,
};
pub use spinor::{SpinState, Spinor};
pub use sweep::{run_sweep, write_outputs, OutputFormat, SweepConfig, SweepRow, SweepTable};
pub use units::{Quantity, Unit};
