//! Scenario ingestion and the natural-unit system used everywhere downstream.
//!
//! Internally ħ = ε₀ = c = 1 with seconds as the base unit: frequencies and
//! rates are in 1/s, lengths are stored as light-travel times R/c, and the
//! dipole moment is pre-scaled by 1/√(ε₀ħc³) so that γ = ω₀³|d|²/3π and
//! C = |d|²(1 − 3cos²θ)/4πR³ need no further constants.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// CODATA 2018 vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// CODATA 2018 reduced Planck constant [J·s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Bohr radius [m].
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Transition frequency used by the Rydberg presets [rad/s].
pub const RYDBERG_OMEGA0: f64 = 1.0e10;

/// Converts an SI dipole moment [C·m] to the internal scaled magnitude.
fn dipole_scale() -> f64 {
    (EPSILON_0 * HBAR * SPEED_OF_LIGHT.powi(3)).sqrt()
}

/// Thermal state of the radiation field, as supplied by the user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Vacuum,
    /// Inverse temperature β = 1/k_BT [1/J].
    Beta(f64),
}

/// Thermal state of the field in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermal {
    Vacuum,
    /// β = ħ/k_BT [s].
    Beta(f64),
}

impl Thermal {
    /// Bose–Einstein occupation N(ω) = 1/(e^{βω} − 1) for ω > 0.
    ///
    /// Exactly zero for the vacuum.
    pub fn occupation(&self, omega: f64) -> f64 {
        match *self {
            Thermal::Vacuum => 0.0,
            Thermal::Beta(beta) => {
                let x = beta * omega.abs();
                if x > 700.0 {
                    0.0
                } else {
                    1.0 / x.exp_m1()
                }
            }
        }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, Thermal::Vacuum)
    }
}

/// A physical scenario in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Transition angular frequency [rad/s].
    pub omega0_si: f64,
    /// Transition dipole moment [C·m].
    pub dipole_si: [f64; 3],
    /// Separation R₂ − R₁ [m].
    pub separation_si: [f64; 3],
    pub temperature: Temperature,
    /// UV cutoff angular frequency [rad/s] for single-dipole shifts.
    pub cutoff_si: f64,
    /// Principal quantum number the defaults were derived from, if any.
    pub rydberg_n: Option<u32>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega0_si.is_finite() && self.omega0_si > 0.0) {
            return Err(Error::Config(format!(
                "transition frequency must be positive, got {}",
                self.omega0_si
            )));
        }
        let r = Vector3::from(self.separation_si);
        if !(r.norm().is_finite() && r.norm() > 0.0) {
            return Err(Error::Config("separation must be non-zero".into()));
        }
        let d = Vector3::from(self.dipole_si);
        if !d.norm().is_finite() {
            return Err(Error::Config("dipole moment must be finite".into()));
        }
        if !(self.cutoff_si.is_finite() && self.cutoff_si > self.omega0_si) {
            return Err(Error::Config(format!(
                "cutoff {} must exceed the transition frequency {}",
                self.cutoff_si, self.omega0_si
            )));
        }
        if let Temperature::Beta(beta) = self.temperature {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::Config(format!(
                    "inverse temperature must be positive, got {beta}"
                )));
            }
        }
        Ok(())
    }

    /// Same scenario with the separation rescaled to `length` [m] along its current direction.
    pub fn with_separation_length(&self, length: f64) -> ScenarioConfig {
        let r = Vector3::from(self.separation_si);
        let new = r / r.norm() * length;
        ScenarioConfig {
            separation_si: [new.x, new.y, new.z],
            ..self.clone()
        }
    }

    /// Characteristic Rydberg radius n²a₀ [m], if the scenario came from a preset.
    pub fn rydberg_radius(&self) -> Option<f64> {
        self.rydberg_n.map(rydberg_radius)
    }
}

/// Characteristic radius r_a = n²a₀ [m].
pub fn rydberg_radius(n: u32) -> f64 {
    let n = n as f64;
    n * n * BOHR_RADIUS
}

/// Rydberg preset: ω₀ = 10¹⁰ rad/s, |d| = (3/2)n²a₀e along x̂, R = 10 r_a along ẑ,
/// cutoff 2πc/r_a, vacuum field.
pub fn rydberg_defaults(n: u32) -> ScenarioConfig {
    let n = n.max(1);
    let ra = rydberg_radius(n);
    let dipole = 1.5 * ra * ELEMENTARY_CHARGE;
    ScenarioConfig {
        omega0_si: RYDBERG_OMEGA0,
        dipole_si: [dipole, 0.0, 0.0],
        separation_si: [0.0, 0.0, 10.0 * ra],
        temperature: Temperature::Vacuum,
        cutoff_si: 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / ra,
        rydberg_n: Some(n),
    }
}

/// Scenario parameters in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParams {
    /// Transition frequency ω₀ [1/s].
    pub omega0: f64,
    /// Scaled dipole vector; γ = ω₀³|d|²/3π.
    pub d: Vector3<f64>,
    /// Separation as a light-travel time R/c [s].
    pub rvec: Vector3<f64>,
    pub rhat: Vector3<f64>,
    pub thermal: Thermal,
    /// UV cutoff [1/s].
    pub cutoff: f64,
    /// Default regulator ε for the single-dipole principal-value integrals [s].
    pub pv_regulator_eps: f64,
}

impl NaturalParams {
    /// |R|/c [s].
    pub fn separation(&self) -> f64 {
        self.rvec.norm()
    }

    /// Dimensionless ω₀R/c.
    pub fn phase(&self) -> f64 {
        self.omega0 * self.separation()
    }

    /// Occupation of the field mode at ω₀.
    pub fn occupation(&self) -> f64 {
        self.thermal.occupation(self.omega0)
    }

    /// Same scenario with a different separation vector (light-seconds).
    pub fn with_rvec(&self, rvec: Vector3<f64>) -> Result<NaturalParams> {
        let norm = rvec.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain("separation must be non-zero".into()));
        }
        Ok(NaturalParams {
            rvec,
            rhat: rvec / norm,
            ..self.clone()
        })
    }

    /// Converts back to SI. `rydberg_n` is not carried through natural units.
    pub fn to_si(&self) -> ScenarioConfig {
        let d = self.d * dipole_scale();
        let r = self.rvec * SPEED_OF_LIGHT;
        ScenarioConfig {
            omega0_si: self.omega0,
            dipole_si: [d.x, d.y, d.z],
            separation_si: [r.x, r.y, r.z],
            temperature: match self.thermal {
                Thermal::Vacuum => Temperature::Vacuum,
                Thermal::Beta(beta) => Temperature::Beta(beta / HBAR),
            },
            cutoff_si: self.cutoff,
            rydberg_n: None,
        }
    }
}

/// Converts an SI scenario into natural units.
pub fn to_natural(cfg: &ScenarioConfig) -> Result<NaturalParams> {
    cfg.validate()?;
    let rvec = Vector3::from(cfg.separation_si) / SPEED_OF_LIGHT;
    let norm = rvec.norm();
    let thermal = match cfg.temperature {
        Temperature::Vacuum => Thermal::Vacuum,
        // β[1/J] · ħ[J·s] → s
        Temperature::Beta(beta) => Thermal::Beta(beta * HBAR),
    };
    Ok(NaturalParams {
        omega0: cfg.omega0_si,
        d: Vector3::from(cfg.dipole_si) / dipole_scale(),
        rvec,
        rhat: rvec / norm,
        thermal,
        cutoff: cfg.cutoff_si,
        pv_regulator_eps: 1.0e-3 / cfg.cutoff_si,
    })
}

/// Inverse temperature β [1/J] for a temperature in kelvin.
pub fn beta_from_kelvin(kelvin: f64) -> f64 {
    1.0 / (BOLTZMANN * kelvin)
}
