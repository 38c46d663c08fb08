//! Physical constants and the handful of unit conversions the rest of the
//! crate needs.
//!
//! Gaussian-CGS values are authoritative: the radiative decay constant is a
//! gaussian-unit expression (`μB² ω³ / ħ c³`), so `MU_B`, `HBAR` and `C` are
//! stored in erg/G, erg·s and cm/s. The eV-based forms are derived from them
//! by exact division so that both forms agree to rounding.
//!
//! Source: CODATA 2018 recommended values (NIST SP 961, May 2019). Values
//! that are exact in the 2019 SI (`e`, `h`, `c`) are exact here too.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;
/// Speed of light, cm/s (exact).
pub const C: f64 = 2.997_924_58e10;
/// Reduced Planck constant, erg·s.
pub const HBAR: f64 = 1.054_571_817e-27;
/// Bohr magneton, erg/G.
pub const MU_B: f64 = 9.274_010_078_3e-21;
/// Electron mass, g.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;

/// erg per eV.
pub const ERG_PER_EV: f64 = ELEMENTARY_CHARGE_C * 1e7;
/// Elementary charge in statcoulomb, `e[C] · c[cm/s] / 10`.
pub const ELEMENTARY_CHARGE_ESU: f64 = ELEMENTARY_CHARGE_C * C / 10.0;
/// Reduced Planck constant, eV·s.
pub const HBAR_EV_S: f64 = HBAR / ERG_PER_EV;
/// Bohr magneton, eV/T.
pub const MU_B_EV_PER_T: f64 = MU_B * GAUSS_PER_TESLA / ERG_PER_EV;
/// Gauss per tesla (exact).
pub const GAUSS_PER_TESLA: f64 = 1e4;

/// The constants bundled as a value, for callers that prefer passing them
/// around explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub mu_b_erg_per_gauss: f64,
    pub mu_b_ev_per_tesla: f64,
    pub hbar_erg_s: f64,
    pub hbar_ev_s: f64,
    pub c_cm_per_s: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        mu_b_erg_per_gauss: MU_B,
        mu_b_ev_per_tesla: MU_B_EV_PER_T,
        hbar_erg_s: HBAR,
        hbar_ev_s: HBAR_EV_S,
        c_cm_per_s: C,
    };

    /// `|e| ħ / 2 mₑ c` in erg/G.
    pub fn bohr_magneton_from_definition() -> f64 {
        ELEMENTARY_CHARGE_ESU * HBAR / (2.0 * ELECTRON_MASS * C)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Drive parameters reduced to the dimensionless strength `x = 2μB H0 / ħω0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub x: f64,
    /// rad/s
    pub omega0: f64,
    /// 1/s, see [`reference_decay_rate`].
    pub gamma_ref: f64,
}

impl ReducedParams {
    pub fn new(h0_gauss: f64, omega0: f64) -> Result<Self> {
        Ok(Self {
            x: reduced_drive_strength(h0_gauss, omega0)?,
            omega0,
            gamma_ref: reference_decay_rate(omega0)?,
        })
    }
}

fn check_omega0(omega0: f64) -> Result<()> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(domain(format!(
            "drive frequency must be finite and positive, got {omega0}"
        )));
    }
    Ok(())
}

/// `x = 2 μB H0 / (ħ ω0)` with `H0` in gauss and `omega0` in rad/s.
pub fn reduced_drive_strength(h0_gauss: f64, omega0: f64) -> Result<f64> {
    if !(h0_gauss.is_finite() && h0_gauss >= 0.0) {
        return Err(domain(format!(
            "field amplitude must be finite and non-negative, got {h0_gauss}"
        )));
    }
    check_omega0(omega0)?;
    Ok(2.0 * MU_B * h0_gauss / (HBAR * omega0))
}

/// Field amplitude in gauss that produces drive strength `x` at `omega0`.
pub fn field_for_drive_strength(x: f64, omega0: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain(format!("drive strength must be non-negative, got {x}")));
    }
    check_omega0(omega0)?;
    Ok(x * HBAR * omega0 / (2.0 * MU_B))
}

/// Field-independent part of the radiative rate, `2 μB² ω0³ / (3 ħ c³)` in 1/s.
///
/// The dressed-state rate is `γ_ref · (Ω0/ω0)³ · ((Ω+ω0)/Ω)²`.
pub fn reference_decay_rate(omega0: f64) -> Result<f64> {
    check_omega0(omega0)?;
    Ok(2.0 * MU_B * MU_B * omega0.powi(3) / (3.0 * HBAR * C.powi(3)))
}

/// Photon energy in eV to angular frequency in rad/s.
pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev / HBAR_EV_S
}

pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR_EV_S
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    #[serde(rename = "eV", alias = "ev")]
    ElectronVolt,
    #[serde(rename = "rad/s")]
    RadPerSecond,
    Tesla,
    Gauss,
    #[serde(rename = "s")]
    Second,
    #[serde(rename = "ns")]
    Nanosecond,
    #[serde(rename = "ps")]
    Picosecond,
    #[serde(rename = "fs")]
    Femtosecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Energy and angular frequency, related by `E = ħω`.
    Frequency,
    MagneticField,
    Time,
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::ElectronVolt | Unit::RadPerSecond => Dimension::Frequency,
            Unit::Tesla | Unit::Gauss => Dimension::MagneticField,
            Unit::Second | Unit::Nanosecond | Unit::Picosecond | Unit::Femtosecond => {
                Dimension::Time
            }
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::ElectronVolt => "eV",
            Unit::RadPerSecond => "rad/s",
            Unit::Tesla => "T",
            Unit::Gauss => "G",
            Unit::Second => "s",
            Unit::Nanosecond => "ns",
            Unit::Picosecond => "ps",
            Unit::Femtosecond => "fs",
        }
    }

    // Multiplier into the canonical unit of the dimension (rad/s, G, s).
    fn scale(self) -> f64 {
        match self {
            Unit::ElectronVolt => 1.0 / HBAR_EV_S,
            Unit::RadPerSecond => 1.0,
            Unit::Tesla => GAUSS_PER_TESLA,
            Unit::Gauss => 1.0,
            Unit::Second => 1.0,
            Unit::Nanosecond => 1e-9,
            Unit::Picosecond => 1e-12,
            Unit::Femtosecond => 1e-15,
        }
    }
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "eV" | "ev" => Unit::ElectronVolt,
            "rad/s" => Unit::RadPerSecond,
            "T" | "tesla" => Unit::Tesla,
            "G" | "gauss" => Unit::Gauss,
            "s" => Unit::Second,
            "ns" => Unit::Nanosecond,
            "ps" => Unit::Picosecond,
            "fs" => Unit::Femtosecond,
            other => return Err(Error::Usage(format!("unknown unit `{other}`"))),
        })
    }
}

/// Linear conversion between two units of the same dimension.
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64> {
    if from.dimension() != to.dimension() {
        return Err(Error::Usage(format!(
            "cannot convert {} to {}",
            from.symbol(),
            to.symbol()
        )));
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.scale() / to.scale())
}

/// A number tagged with its unit, written `"<value> <unit>"`, e.g. `"1000 T"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn to(self, unit: Unit) -> Result<f64> {
        convert(self.value, self.unit, unit)
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const SYMBOLS: [&str; 12] = [
            "rad/s", "gauss", "tesla", "eV", "ev", "ns", "ps", "fs", "T", "G", "s", "",
        ];
        let s = s.trim();
        for sym in SYMBOLS {
            let Some(num) = s.strip_suffix(sym) else { continue };
            if sym.is_empty() {
                break;
            }
            if let Ok(value) = num.trim().parse::<f64>() {
                return Ok(Self { value, unit: sym.parse()? });
            }
        }
        Err(Error::Usage(format!(
            "`{s}` is not a quantity with a unit (e.g. \"1000 T\", \"2.5 ps\")"
        )))
    }
}
