//! Brute-force cross-checks of the analytic results: direct integration of
//! the time-dependent Schrödinger equation, quasienergies from the
//! one-period propagator, and Monte Carlo sampling of the decay scenarios.

mod integrator;
mod monodromy;
mod monte_carlo;

pub use integrator::{integrate_tdse, propagate, tdse_flip_probability, IntegratorSettings, Trajectory};
pub use monodromy::{mod_distance, monodromy_matrix, quasienergies_from_monodromy, Quasienergies};
pub use monte_carlo::{monte_carlo_flip, MonteCarloEstimate};
