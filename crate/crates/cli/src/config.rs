//! JSON run configuration.

use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;

use dipolekit_core::units::{
    beta_from_kelvin, rydberg_defaults, to_natural, NaturalParams, ScenarioConfig, Temperature,
    SPEED_OF_LIGHT,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Standard,
    Partial,
    Secular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Symmetric,
    Antisymmetric,
    Gg,
    Ee,
    Eps1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeparationUnit {
    /// Multiples of the Rydberg radius n²a₀.
    #[default]
    Ra,
    /// Metres.
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMethod {
    #[default]
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Grid {
    pub fn linear(from: f64, to: f64, points: usize) -> Grid {
        Grid {
            from,
            to,
            points,
            scale: Scale::Linear,
        }
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Config(format!(
                "{name} grid bounds must be finite"
            )));
        }
        if self.points < 2 {
            return Err(CliError::Config(format!(
                "{name} grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if self.from >= self.to {
            return Err(CliError::Config(format!(
                "{name} grid must be strictly increasing, got {} to {}",
                self.from, self.to
            )));
        }
        if self.scale == Scale::Log && self.from <= 0.0 {
            return Err(CliError::Config(format!(
                "{name} grid on a log scale must start above zero"
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|k| {
                let f = k as f64 / n as f64;
                match self.scale {
                    Scale::Linear if k == n => self.to,
                    Scale::Linear => self.from + f * (self.to - self.from),
                    Scale::Log => self.from * (self.to / self.from).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    /// Distance from the pair [m].
    pub distance_si: f64,
    pub direction: [f64; 3],
}

/// The document read from `--config`. Every field is optional; a scenario
/// needs either `rydberg_n` or the four SI fields.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub rydberg_n: Option<u32>,
    /// [rad/s]
    pub omega0_si: Option<f64>,
    /// [C·m]
    pub dipole_si: Option<[f64; 3]>,
    /// [m]
    pub separation_si: Option<[f64; 3]>,
    /// Separation length in Rydberg radii, along the configured direction.
    pub separation_ra: Option<f64>,
    /// [rad/s]
    pub cutoff_si: Option<f64>,
    /// Field temperature [K]; absent means vacuum.
    pub temperature_k: Option<f64>,
    /// Inverse temperature [1/J]; alternative to `temperature_k`.
    pub beta_si: Option<f64>,

    pub model: Option<Model>,
    pub initial: Option<Initial>,
    pub seed: Option<u64>,

    /// In units of 1/γ.
    pub time: Option<Grid>,
    /// Detuning from each peak center [rad/s].
    pub frequency: Option<Grid>,
    pub separation: Option<Grid>,
    #[serde(default)]
    pub separation_unit: SeparationUnit,
    /// γt at which `sweep` samples the populations.
    pub sweep_time: Option<f64>,

    pub probes: Option<usize>,
    #[serde(default)]
    pub spectrum_method: SpectrumMethod,
    /// Numeric spectra integrate over this many lifetimes.
    pub window_decays: Option<f64>,
    pub detector: Option<DetectorConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, grid) in [
            ("time", &self.time),
            ("frequency", &self.frequency),
            ("separation", &self.separation),
        ] {
            if let Some(g) = grid {
                g.validate(name)?;
            }
        }
        if let Some(g) = &self.time {
            if g.from < 0.0 {
                return Err(CliError::Config(
                    "time grid must start at or after 0".into(),
                ));
            }
        }
        if let Some(g) = &self.separation {
            if g.from <= 0.0 {
                return Err(CliError::Config("separation grid must be positive".into()));
            }
            if self.separation_unit == SeparationUnit::Ra && self.rydberg_n.is_none() {
                return Err(CliError::Config(
                    "separation grid in r_a needs rydberg_n".into(),
                ));
            }
        }
        if self.separation_ra.is_some() && self.rydberg_n.is_none() {
            return Err(CliError::Config("separation_ra needs rydberg_n".into()));
        }
        if self.temperature_k.is_some() && self.beta_si.is_some() {
            return Err(CliError::Config(
                "give temperature_k or beta_si, not both".into(),
            ));
        }
        if let Some(t) = self.temperature_k {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!(
                    "temperature must be positive, got {t}"
                )));
            }
        }
        if let Some(t) = self.sweep_time {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Config(format!(
                    "sweep_time must be non-negative, got {t}"
                )));
            }
        }
        if let Some(w) = self.window_decays {
            if !(w.is_finite() && w > 0.0) {
                return Err(CliError::Config(format!(
                    "window_decays must be positive, got {w}"
                )));
            }
        }
        if self.probes == Some(0) {
            return Err(CliError::Config("probes must be at least 1".into()));
        }
        Ok(())
    }

    /// The SI scenario: the Rydberg preset (if any) overridden field by field.
    pub fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = match self.rydberg_n {
            Some(n) if n >= 1 => rydberg_defaults(n),
            Some(_) => return Err(CliError::Config("rydberg_n must be at least 1".into())),
            None => {
                let missing: Vec<&str> = [
                    ("omega0_si", self.omega0_si.is_none()),
                    ("dipole_si", self.dipole_si.is_none()),
                    ("separation_si", self.separation_si.is_none()),
                    ("cutoff_si", self.cutoff_si.is_none()),
                ]
                .into_iter()
                .filter_map(|(k, m)| m.then_some(k))
                .collect();
                if !missing.is_empty() {
                    return Err(CliError::Config(format!(
                        "without rydberg_n the scenario needs {}",
                        missing.join(", ")
                    )));
                }
                ScenarioConfig {
                    omega0_si: 0.0,
                    dipole_si: [0.0; 3],
                    separation_si: [0.0; 3],
                    temperature: Temperature::Vacuum,
                    cutoff_si: 0.0,
                    rydberg_n: None,
                }
            }
        };
        if let Some(w) = self.omega0_si {
            cfg.omega0_si = w;
        }
        if let Some(d) = self.dipole_si {
            cfg.dipole_si = d;
        }
        if let Some(r) = self.separation_si {
            cfg.separation_si = r;
        }
        if let Some(c) = self.cutoff_si {
            cfg.cutoff_si = c;
        }
        if let Some(t) = self.temperature_k {
            cfg.temperature = Temperature::Beta(beta_from_kelvin(t));
        }
        if let Some(b) = self.beta_si {
            cfg.temperature = Temperature::Beta(b);
        }
        if let Some(m) = self.separation_ra {
            let ra = cfg.rydberg_radius().expect("validated: rydberg_n is set");
            cfg = self.at_length(&cfg, m * ra)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn at_length(&self, cfg: &ScenarioConfig, length: f64) -> Result<ScenarioConfig, CliError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(CliError::Config(format!(
                "separation must be positive, got {length} m"
            )));
        }
        Ok(cfg.with_separation_length(length))
    }

    pub fn natural(&self) -> Result<NaturalParams, CliError> {
        Ok(to_natural(&self.scenario()?)?)
    }

    /// Separation lengths [m] of the sweep grid.
    pub fn separations(&self, default: Grid) -> Result<Vec<f64>, CliError> {
        let grid = self.separation.unwrap_or(default);
        grid.validate("separation")?;
        let unit = match self.separation_unit {
            SeparationUnit::Ra => self
                .rydberg_n
                .map(dipolekit_core::units::rydberg_radius)
                .ok_or_else(|| CliError::Config("separation grid in r_a needs rydberg_n".into()))?,
            SeparationUnit::M => 1.0,
        };
        Ok(grid.values().into_iter().map(|r| r * unit).collect())
    }

    /// Natural parameters with the separation length replaced by `length` [m].
    pub fn natural_at(&self, length: f64) -> Result<NaturalParams, CliError> {
        Ok(to_natural(&self.at_length(&self.scenario()?, length)?)?)
    }

    /// Geometry factor of the configured detector; 1 without one.
    pub fn mu_det(&self, params: &NaturalParams) -> Result<f64, CliError> {
        match self.detector {
            None => Ok(1.0),
            Some(d) => {
                let det = dipolekit_core::regression::Detector {
                    distance: d.distance_si / SPEED_OF_LIGHT,
                    direction: d.direction.into(),
                };
                Ok(det.mu_det(&params.d)?)
            }
        }
    }
}
