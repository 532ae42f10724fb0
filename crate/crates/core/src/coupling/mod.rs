//! Coupling coefficients: dyadic tensors, rates, and level shifts.

pub mod gauge;
pub mod pv;

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::units::{NaturalParams, Thermal};
use pv::PvRange;

/// Regulator for the unbounded cross integrals, in units of the separation.
const CROSS_REGULATOR: f64 = 1e-3;
/// Below this ωR the bracketed near-zone combinations are summed as series.
const SERIES_THRESHOLD: f64 = 0.5;

/// sin x / x.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// cos x/x² − sin x/x³, finite at the origin.
fn tau_near(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        // Σ_{n≥1} (−1)ⁿ 2n x^{2n−2}/(2n+1)!
        let x2 = x * x;
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 6.0;
        for n in 1..12 {
            let k = 2 * n;
            let term = if n % 2 == 0 { 1.0 } else { -1.0 } * k as f64 * pow / fact;
            sum += term;
            pow *= x2;
            fact *= ((k + 2) * (k + 3)) as f64;
        }
        sum
    } else {
        x.cos() / (x * x) - x.sin() / (x * x * x)
    }
}

fn check_separation(rvec: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    let r = rvec.norm();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(
            "separation must be non-zero and finite".into(),
        ));
    }
    Ok((r, rvec / r))
}

fn check_frequency(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!(
            "frequency must be positive, got {omega}"
        )));
    }
    Ok(())
}

/// Transverse and longitudinal projectors (δ − R̂R̂, δ − 3R̂R̂).
fn projectors(rhat: &Vector3<f64>) -> (Matrix3<f64>, Matrix3<f64>) {
    let rr = rhat * rhat.transpose();
    let id = Matrix3::identity();
    (id - rr, id - 3.0 * rr)
}

/// Contractions d·(δ − R̂R̂)·d and d·(δ − 3R̂R̂)·d.
fn projected(d: &Vector3<f64>, rhat: &Vector3<f64>) -> (f64, f64) {
    let d2 = d.norm_squared();
    let dr = d.dot(rhat);
    (d2 - dr * dr, d2 - 3.0 * dr * dr)
}

/// Radiative coupling tensor τ_ij(ω, R); γ₁₂ = d_i d_j τ_ij at ω₀.
pub fn tau_tensor(omega: f64, rvec: &Vector3<f64>) -> Result<Matrix3<f64>> {
    check_frequency(omega)?;
    let (r, rhat) = check_separation(rvec)?;
    let x = omega * r;
    let (p, q) = projectors(&rhat);
    Ok(omega.powi(3) / (2.0 * PI) * (p * sinc(x) + q * tau_near(x)))
}

/// Resonant energy-transfer tensor V_ij(ω, R); Δ₁₂ = d_i d_j V_ij at ω₀.
pub fn v_tensor(omega: f64, rvec: &Vector3<f64>) -> Result<Matrix3<f64>> {
    check_frequency(omega)?;
    let (r, rhat) = check_separation(rvec)?;
    let x = omega * r;
    let (p, q) = projectors(&rhat);
    let (s, c) = x.sin_cos();
    let far = c / x;
    let near = s / (x * x) + c / (x * x * x);
    Ok(-omega.powi(3) / (4.0 * PI) * (p * far - q * near))
}

/// Static Coulomb coupling C = d_i d_j (δ_ij − 3R̂_iR̂_j)/(4πR³).
pub fn static_coulomb(d: &Vector3<f64>, rvec: &Vector3<f64>) -> Result<f64> {
    let (r, rhat) = check_separation(rvec)?;
    let (_, q) = projected(d, &rhat);
    Ok(q / (4.0 * PI * r.powi(3)))
}

/// Single-dipole spontaneous rate γ = ω₀³|d|²/3π.
pub fn single_decay_rate(omega0: f64, d: &Vector3<f64>) -> f64 {
    omega0.powi(3) * d.norm_squared() / (3.0 * PI)
}

fn transfer_parts(
    omega: f64,
    d: &Vector3<f64>,
    rvec: &Vector3<f64>,
) -> Result<(f64, f64, f64, f64)> {
    check_frequency(omega)?;
    let (r, rhat) = check_separation(rvec)?;
    let (p, q) = projected(d, &rhat);
    Ok((omega * r, p, q, omega.powi(3) / (4.0 * PI)))
}

/// Δ₁₂ = d_i d_j V_ij(ω, R).
pub fn delta12(omega: f64, d: &Vector3<f64>, rvec: &Vector3<f64>) -> Result<f64> {
    let (x, p, q, k) = transfer_parts(omega, d, rvec)?;
    let (s, c) = x.sin_cos();
    let x3 = x * x * x;
    Ok(-k * p * (c / x) + k * q * (s / (x * x) + c / x3))
}

/// Transverse-field part Δ̃₁₂ of the transfer shift; Δ₁₂ − Δ̃₁₂ = C.
pub fn delta12_transverse(omega: f64, d: &Vector3<f64>, rvec: &Vector3<f64>) -> Result<f64> {
    let (x, p, q, k) = transfer_parts(omega, d, rvec)?;
    let (s, c) = x.sin_cos();
    let x3 = x * x * x;
    let half = (0.5 * x).sin();
    let one_minus_cos = 2.0 * half * half;
    Ok(-k * p * (c / x) + k * q * (s / (x * x) - one_minus_cos / x3))
}

/// γ_μμ(ω): (1+N)γω/ω₀ for ω > 0 and N γ|ω|/ω₀ for ω < 0, with N taken at |ω|.
pub fn gamma_self(omega: f64, n: f64, gamma: f64, omega0: f64) -> f64 {
    if omega >= 0.0 {
        (1.0 + n) * gamma * omega / omega0
    } else {
        n * gamma * omega.abs() / omega0
    }
}

/// γ₁₂(ω) = (1+N) d_i d_j τ_ij(ω, R) ω₀²/ω², continued to ω < 0 as N(|ω|) times the
/// spontaneous form at |ω|.
pub fn gamma_cross(
    omega: f64,
    n: f64,
    d: &Vector3<f64>,
    rvec: &Vector3<f64>,
    omega0: f64,
) -> Result<f64> {
    let w = omega.abs();
    check_frequency(w)?;
    let (r, rhat) = check_separation(rvec)?;
    let spontaneous = dtd(w, r, &projected(d, &rhat)) * omega0 * omega0 / (w * w);
    Ok(if omega >= 0.0 {
        (1.0 + n) * spontaneous
    } else {
        n * spontaneous
    })
}

/// d_i d_j τ_ij(ω, R) from precomputed projections.
fn dtd(omega: f64, r: f64, pq: &(f64, f64)) -> f64 {
    let x = omega * r;
    omega.powi(3) / (2.0 * PI) * (pq.0 * sinc(x) + pq.1 * tau_near(x))
}

/// Vacuum single-dipole shift −(γ/2π) ln((Λ² − ω₀²)/ω₀²).
pub fn delta_single_vacuum(gamma: f64, omega0: f64, cutoff: f64) -> f64 {
    let ratio = (cutoff - omega0) * (cutoff + omega0) / (omega0 * omega0);
    -gamma / (2.0 * PI) * ratio.ln()
}

/// Single-dipole shift Δ = (γ/π) PV∫₀^Λ (1+2N_k) ω_k/(ω₀² − ω_k²) dω_k.
pub fn delta_single(params: &NaturalParams) -> Result<f64> {
    let gamma = single_decay_rate(params.omega0, &params.d);
    let vac = delta_single_vacuum(gamma, params.omega0, params.cutoff);
    if params.thermal.is_vacuum() {
        return Ok(vac);
    }
    let w0 = params.omega0;
    let th = params.thermal;
    let f = move |wk: f64| gamma / PI * 2.0 * th.occupation(wk) * wk / ((w0 - wk) * (w0 + wk));
    let range = PvRange {
        pole: w0,
        upper: Some(params.cutoff),
        max_width: None,
    };
    Ok(vac + pv::extrapolated(&f, &range, params.pv_regulator_eps)?)
}

fn shift_bracket(omega: f64, wk: f64, thermal: &Thermal) -> f64 {
    let n = thermal.occupation(wk);
    if n == 0.0 {
        1.0 / (omega - wk)
    } else {
        (1.0 + n) / (omega - wk) + n / (omega + wk)
    }
}

fn check_signed(omega: f64) -> Result<()> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "shift frequency must be non-zero, got {omega}"
        )));
    }
    Ok(())
}

/// Self shift S_μμ(ω) = (γ/2π) PV∫₀^Λ (ω_k/ω₀)[(1+N_k)/(ω−ω_k) + N_k/(ω+ω_k)] dω_k.
pub fn pv_shift_self(omega: f64, params: &NaturalParams) -> Result<f64> {
    check_signed(omega)?;
    if params.cutoff <= omega.abs() {
        return Err(Error::Domain(format!(
            "cutoff {} must exceed |ω| = {}",
            params.cutoff,
            omega.abs()
        )));
    }
    let gamma = single_decay_rate(params.omega0, &params.d);
    let w0 = params.omega0;
    let th = params.thermal;
    let f = move |wk: f64| gamma / (2.0 * PI) * wk / w0 * shift_bracket(omega, wk, &th);
    let range = PvRange {
        pole: omega.abs(),
        upper: Some(params.cutoff),
        max_width: None,
    };
    pv::extrapolated(&f, &range, params.pv_regulator_eps)
}

/// Cross shift S₁₂(ω) = (1/2π) PV∫₀^∞ d_i d_j τ_ij(ω_k, R)(ω₀²/ω_k²)[…] dω_k.
///
/// No UV cutoff is applied; the oscillatory tail is regulated and extrapolated.
pub fn pv_shift_cross(omega: f64, params: &NaturalParams) -> Result<f64> {
    check_signed(omega)?;
    let (r, rhat) = check_separation(&params.rvec)?;
    let pq = projected(&params.d, &rhat);
    let w0 = params.omega0;
    let th = params.thermal;
    let f = move |wk: f64| {
        if wk == 0.0 {
            return 0.0;
        }
        dtd(wk, r, &pq) * w0 * w0 / (wk * wk) / (2.0 * PI) * shift_bracket(omega, wk, &th)
    };
    let range = PvRange {
        pole: omega.abs(),
        upper: None,
        max_width: Some(PI / r),
    };
    pv::extrapolated(&f, &range, CROSS_REGULATOR * r)
}

/// Δ₁₂ by direct principal-value quadrature of (1/π)∫₀^∞ d_i d_j τ_ij(ω_k,R) ω_k/(ω₀²−ω_k²).
///
/// Independent of the closed form returned by [`delta12`].
pub fn delta12_quadrature(params: &NaturalParams) -> Result<f64> {
    let (r, rhat) = check_separation(&params.rvec)?;
    let pq = projected(&params.d, &rhat);
    let w0 = params.omega0;
    let f = move |wk: f64| dtd(wk, r, &pq) * wk / ((w0 - wk) * (w0 + wk)) / PI;
    let range = PvRange {
        pole: w0,
        upper: None,
        max_width: Some(PI / r),
    };
    pv::extrapolated(&f, &range, CROSS_REGULATOR * r)
}

/// Every coefficient of the three master equations for one scenario.
#[derive(Debug, Clone)]
pub struct CouplingSet {
    pub params: NaturalParams,
    /// Static Coulomb coupling C.
    pub c: f64,
    /// Single-dipole rate γ.
    pub gamma0: f64,
    /// Single-dipole shift Δ.
    pub delta: f64,
    pub delta12: f64,
    pub delta12_transverse: f64,
}

impl CouplingSet {
    pub fn new(params: &NaturalParams) -> Result<CouplingSet> {
        let w0 = params.omega0;
        Ok(CouplingSet {
            params: params.clone(),
            c: static_coulomb(&params.d, &params.rvec)?,
            gamma0: single_decay_rate(w0, &params.d),
            delta: delta_single(params)?,
            delta12: delta12(w0, &params.d, &params.rvec)?,
            delta12_transverse: delta12_transverse(w0, &params.d, &params.rvec)?,
        })
    }

    /// Thermal occupation N(|ω|).
    pub fn occupation(&self, omega: f64) -> f64 {
        self.params.thermal.occupation(omega.abs())
    }

    pub fn gamma_self_at(&self, omega: f64) -> f64 {
        gamma_self(
            omega,
            self.occupation(omega),
            self.gamma0,
            self.params.omega0,
        )
    }

    pub fn gamma12_at(&self, omega: f64) -> Result<f64> {
        gamma_cross(
            omega,
            self.occupation(omega),
            &self.params.d,
            &self.params.rvec,
            self.params.omega0,
        )
    }

    /// γ₁₂(ω) with the field in its vacuum state.
    pub fn gamma12_vacuum(&self, omega: f64) -> Result<f64> {
        gamma_cross(
            omega,
            0.0,
            &self.params.d,
            &self.params.rvec,
            self.params.omega0,
        )
    }

    pub fn s_self(&self, omega: f64) -> Result<f64> {
        pv_shift_self(omega, &self.params)
    }

    pub fn s_cross(&self, omega: f64) -> Result<f64> {
        pv_shift_cross(omega, &self.params)
    }

    /// Shifted single-dipole frequency ω̃₀ = ω₀ + Δ.
    pub fn omega0_shifted(&self) -> f64 {
        self.params.omega0 + self.delta
    }

    /// Checks that the 2×2 rate matrix [[γ_s, γ₁₂], [γ₁₂, γ_s]] at ω is positive semidefinite.
    pub fn check_rate_matrix(&self, omega: f64) -> Result<()> {
        let gs = self.gamma_self_at(omega);
        let gc = self.gamma12_at(omega)?;
        if gc.abs() > gs * (1.0 + 1e-12) {
            return Err(Error::Numerical(format!(
                "rate matrix not positive semidefinite at ω = {omega:e}: |γ12| = {:e} > γ = {gs:e}",
                gc.abs()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
