//! Generalised-gauge integrands for the single-dipole level shifts and the
//! transfer shift. Each must come out independent of the gauge parameter α_k.

use crate::error::{Error, Result};

/// Choice of the mode-dependent gauge parameter α_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    /// α = 0.
    Coulomb,
    /// α = 1.
    Multipolar,
    /// α_k = ω₀/(ω₀ + ω_k).
    Symmetric,
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeProbe {
    pub alpha_choice: AlphaChoice,
    pub omega0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Excited,
    Ground,
}

impl GaugeProbe {
    pub fn new(alpha_choice: AlphaChoice, omega0: f64) -> Self {
        GaugeProbe {
            alpha_choice,
            omega0,
        }
    }

    pub fn alpha(&self, omega_k: f64) -> f64 {
        match self.alpha_choice {
            AlphaChoice::Coulomb => 0.0,
            AlphaChoice::Multipolar => 1.0,
            AlphaChoice::Symmetric => self.omega0 / (self.omega0 + omega_k),
            AlphaChoice::Constant(a) => a,
        }
    }

    /// u⁺ = (1−α)√(ω₀/ω_k) − α√(ω_k/ω₀); identically zero for the symmetric choice.
    pub fn u_plus(&self, omega_k: f64) -> f64 {
        if self.alpha_choice == AlphaChoice::Symmetric {
            return 0.0;
        }
        let a = self.alpha(omega_k);
        let s = (self.omega0 / omega_k).sqrt();
        (1.0 - a) * s - a / s
    }

    /// u⁻ = (1−α)√(ω₀/ω_k) + α√(ω_k/ω₀).
    pub fn u_minus(&self, omega_k: f64) -> f64 {
        let a = self.alpha(omega_k);
        let s = (self.omega0 / omega_k).sqrt();
        (1.0 - a) * s + a / s
    }

    fn check(&self, omega_k: f64) -> Result<()> {
        if !(omega_k > 0.0 && omega_k.is_finite()) {
            return Err(Error::Domain(format!(
                "mode frequency must be positive, got {omega_k}"
            )));
        }
        if omega_k == self.omega0 {
            return Err(Error::Domain(
                "mode frequency sits on the resonance pole".into(),
            ));
        }
        Ok(())
    }
}

/// Bracketed integrand of the excited or ground level shift, self-energy included.
pub fn gauge_shift_integrand(
    level: Level,
    omega_k: f64,
    n_k: f64,
    probe: &GaugeProbe,
) -> Result<f64> {
    probe.check(omega_k)?;
    let w0 = probe.omega0;
    let a = probe.alpha(omega_k);
    let up2 = probe.u_plus(omega_k).powi(2);
    let um2 = probe.u_minus(omega_k).powi(2);
    let self_energy = a * (a - 2.0) * (1.0 + 2.0 * n_k) * w0 / omega_k;
    Ok(match level {
        Level::Excited => {
            a * a - self_energy
                + w0 * (up2 * n_k / (omega_k + w0) - um2 * (1.0 + n_k) / (omega_k - w0))
        }
        Level::Ground => {
            a * a
                + self_energy
                + w0 * (um2 * n_k / (omega_k - w0) - up2 * (1.0 + n_k) / (omega_k + w0))
        }
    })
}

/// Bracket α² − 1 − (ω₀/2)[u⁺²/(ω_k+ω₀) + u⁻²/(ω_k−ω₀)] of the transfer shift.
pub fn gauge_delta12_integrand(omega_k: f64, probe: &GaugeProbe) -> Result<f64> {
    probe.check(omega_k)?;
    let w0 = probe.omega0;
    let a = probe.alpha(omega_k);
    let up2 = probe.u_plus(omega_k).powi(2);
    let um2 = probe.u_minus(omega_k).powi(2);
    Ok(a * a - 1.0 - 0.5 * w0 * (up2 / (omega_k + w0) + um2 / (omega_k - w0)))
}

/// Gauge-free value of [`gauge_shift_integrand`].
pub fn shift_integrand_reference(level: Level, omega0: f64, omega_k: f64, n_k: f64) -> f64 {
    let pre = omega0 * omega0 / omega_k;
    match level {
        Level::Excited => pre * ((1.0 + n_k) / (omega0 - omega_k) + n_k / (omega0 + omega_k)),
        Level::Ground => -pre * ((1.0 + n_k) / (omega0 + omega_k) + n_k / (omega0 - omega_k)),
    }
}

/// Gauge-free value of [`gauge_delta12_integrand`].
pub fn delta12_integrand_reference(omega0: f64, omega_k: f64) -> f64 {
    omega_k * omega_k / ((omega0 - omega_k) * (omega0 + omega_k))
}
