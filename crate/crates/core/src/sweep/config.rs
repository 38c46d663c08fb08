use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decay::DecayModel;
use crate::error::{Error, Result};
use crate::floquet::Helicity;
use crate::units::{convert, Dimension, Quantity, Unit};

/// Upper bound on `H0 points × τ0 points`.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Usage(format!("unknown format `{other}`, expected csv or json"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    photon_energy: String,
    h0: RawGrid,
    tau0: RawGrid,
    #[serde(default)]
    decay: Option<RawDecay>,
    #[serde(default)]
    helicity: Option<i32>,
    #[serde(default)]
    n_spins: Option<u64>,
    #[serde(default)]
    output: Option<RawOutput>,
    #[serde(default)]
    threads: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    unit: String,
    values: Option<Vec<f64>>,
    min: Option<f64>,
    max: Option<f64>,
    count: Option<u64>,
    spacing: Option<Spacing>,
    segments: Option<Vec<RawRange>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    min: f64,
    max: f64,
    count: u64,
    #[serde(default)]
    spacing: Spacing,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawDecay {
    Name(String),
    Phenomenological { tau_s: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default)]
    format: OutputFormat,
    path: Option<PathBuf>,
}

/// A validated sweep description. Axes are stored in gauss and seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub photon_energy_ev: f64,
    /// rad/s
    pub omega0: f64,
    pub h0_gauss: Vec<f64>,
    pub tau0_s: Vec<f64>,
    pub decay: DecayModel,
    pub helicity: Helicity,
    pub n_spins: u64,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: u64,
    /// The document as read, echoed into JSON output.
    pub source: Value,
}

fn config_err(field: impl Into<String>, message: impl std::fmt::Display) -> Error {
    Error::Config {
        field: field.into(),
        message: message.to_string(),
    }
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_value(value)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| config_err("<document>", e))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let raw: RawConfig = serde_path_to_error::deserialize(&value).map_err(|e| {
            let path = e.path().to_string();
            config_err(if path == "." { "<document>".into() } else { path }, e.into_inner())
        })?;

        let energy: Quantity = raw
            .photon_energy
            .parse()
            .map_err(|e| config_err("photon_energy", e))?;
        if energy.unit.dimension() != Dimension::Frequency {
            return Err(config_err("photon_energy", "expected an energy (eV) or rad/s"));
        }
        let photon_energy_ev = energy.to(Unit::ElectronVolt).unwrap();
        if !(photon_energy_ev.is_finite() && photon_energy_ev > 0.0) {
            return Err(config_err("photon_energy", "must be positive"));
        }

        let h0_count = raw.h0.count("h0")?;
        let tau0_count = raw.tau0.count("tau0")?;
        let points = h0_count as u128 * tau0_count as u128;
        if points > MAX_GRID_POINTS {
            let chunks = points.div_ceil(MAX_GRID_POINTS);
            return Err(Error::GuardExceeded {
                points,
                limit: MAX_GRID_POINTS,
                suggestion: format!(
                    "split the h0 axis into {chunks} configs of at most {} values each",
                    (MAX_GRID_POINTS / tau0_count as u128).max(1)
                ),
            });
        }

        let h0_gauss = raw.h0.materialize("h0", Dimension::MagneticField, Unit::Gauss, true)?;
        let tau0_s = raw.tau0.materialize("tau0", Dimension::Time, Unit::Second, false)?;

        let decay = match raw.decay {
            None => DecayModel::Radiative,
            Some(RawDecay::Name(name)) if name == "radiative" => DecayModel::Radiative,
            Some(RawDecay::Name(name)) => {
                return Err(config_err(
                    "decay",
                    format!("expected \"radiative\" or {{\"tau_s\": \"<time>\"}}, got \"{name}\""),
                ))
            }
            Some(RawDecay::Phenomenological { tau_s }) => {
                let q: Quantity = tau_s.parse().map_err(|e| config_err("decay.tau_s", e))?;
                if q.unit.dimension() != Dimension::Time {
                    return Err(config_err("decay.tau_s", "expected a time"));
                }
                DecayModel::phenomenological(q.to(Unit::Second).unwrap())
                    .map_err(|e| config_err("decay.tau_s", e))?
            }
        };

        let helicity = Helicity::from_sign(raw.helicity.unwrap_or(1))
            .map_err(|e| config_err("helicity", e))?;
        let n_spins = raw.n_spins.unwrap_or(2);
        if n_spins % 2 != 0 {
            return Err(config_err("n_spins", "must be even for an unpolarized ensemble"));
        }
        if raw.threads == Some(0) {
            return Err(config_err("threads", "must be at least 1"));
        }
        let (format, output) = match raw.output {
            Some(o) => (o.format, o.path),
            None => (OutputFormat::Csv, None),
        };

        Ok(Self {
            photon_energy_ev,
            omega0: energy.to(Unit::RadPerSecond).unwrap(),
            h0_gauss,
            tau0_s,
            decay,
            helicity,
            n_spins,
            format,
            output,
            threads: raw.threads,
            seed: raw.seed.unwrap_or(0),
            source: value,
        })
    }

    pub fn points(&self) -> usize {
        self.h0_gauss.len() * self.tau0_s.len()
    }
}

impl RawRange {
    fn check(&self, field: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(config_err(field, "min and max must be finite"));
        }
        if self.count == 0 {
            return Err(config_err(field, "count must be at least 1"));
        }
        if self.count == 1 && self.min != self.max {
            return Err(config_err(field, "count = 1 needs min = max"));
        }
        if self.count > 1 && self.max <= self.min {
            return Err(config_err(field, "max must exceed min"));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(config_err(field, "log spacing needs min > 0"));
        }
        Ok(())
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.count;
        let last = n.saturating_sub(1).max(1) as f64;
        (0..n).map(move |i| {
            if i == 0 {
                return self.min;
            }
            if i == n - 1 {
                return self.max;
            }
            let f = i as f64 / last;
            match self.spacing {
                Spacing::Lin => self.min + (self.max - self.min) * f,
                Spacing::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * f).exp(),
            }
        })
    }
}

impl RawGrid {
    fn ranges(&self, field: &str) -> Result<Vec<RawRange>> {
        let single = self.min.is_some() || self.max.is_some() || self.count.is_some();
        let forms = [self.values.is_some(), single, self.segments.is_some()];
        if forms.iter().filter(|f| **f).count() != 1 {
            return Err(config_err(
                field,
                "give exactly one of `values`, `min`/`max`/`count`, or `segments`",
            ));
        }
        if self.spacing.is_some() && !single {
            return Err(config_err(format!("{field}.spacing"), "only valid with min/max/count"));
        }
        if single {
            let range = RawRange {
                min: self.min.ok_or_else(|| config_err(format!("{field}.min"), "missing"))?,
                max: self.max.ok_or_else(|| config_err(format!("{field}.max"), "missing"))?,
                count: self.count.ok_or_else(|| config_err(format!("{field}.count"), "missing"))?,
                spacing: self.spacing.unwrap_or_default(),
            };
            range.check(field)?;
            return Ok(vec![range]);
        }
        if let Some(segments) = &self.segments {
            if segments.is_empty() {
                return Err(config_err(format!("{field}.segments"), "must not be empty"));
            }
            for (i, s) in segments.iter().enumerate() {
                s.check(&format!("{field}.segments[{i}]"))?;
            }
            return Ok(segments.clone());
        }
        Ok(Vec::new())
    }

    fn count(&self, field: &str) -> Result<u64> {
        let ranges = self.ranges(field)?;
        Ok(match &self.values {
            Some(v) => v.len() as u64,
            None => ranges.iter().fold(0u64, |n, r| n.saturating_add(r.count)),
        })
    }

    fn materialize(&self, field: &str, dim: Dimension, canonical: Unit, allow_zero: bool) -> Result<Vec<f64>> {
        let unit: Unit = self
            .unit
            .parse()
            .map_err(|e| config_err(format!("{field}.unit"), e))?;
        if unit.dimension() != dim {
            return Err(config_err(
                format!("{field}.unit"),
                format!("`{}` has the wrong dimension", self.unit),
            ));
        }
        let raw: Vec<f64> = match &self.values {
            Some(v) => v.clone(),
            None => self.ranges(field)?.iter().flat_map(|r| r.values().collect::<Vec<_>>()).collect(),
        };
        if raw.is_empty() {
            return Err(config_err(field, "grid must not be empty"));
        }
        let values: Vec<f64> = raw.iter().map(|v| convert(*v, unit, canonical).unwrap()).collect();
        for (i, v) in values.iter().enumerate() {
            let ok = v.is_finite() && if allow_zero { *v >= 0.0 } else { *v > 0.0 };
            if !ok {
                let bound = if allow_zero { "non-negative" } else { "positive" };
                return Err(config_err(field, format!("value #{i} ({}) must be finite and {bound}", raw[i])));
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(config_err(
                field,
                format!("grid must be strictly increasing, value #{} ({}) does not exceed the previous one", i + 1, raw[i + 1]),
            ));
        }
        Ok(values)
    }
}
