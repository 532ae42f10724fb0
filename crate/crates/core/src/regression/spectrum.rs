//! Emission spectra s(ω) = μ ∫∫ e^{−iω(t−t′)} ⟨E⁻(t)·E⁺(t′)⟩ dt dt′.

use std::f64::consts::PI;

use nalgebra::Vector3;

use super::{Key, TransferMatrix};
use crate::coupling::CouplingSet;
use crate::dressed::{symmetric_decay_rates, DressedBasis};
use crate::error::{Error, Result};
use crate::liouvillian::superop::Super;
use crate::liouvillian::{BasisKind, DressedRates, Frame, OperatorBasis};
use crate::ops::{self, Op, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub peak_center: f64,
    pub peak_height: f64,
    /// None when the half-maximum points are not inside the grid.
    pub fwhm: Option<f64>,
    /// Detector geometry factor multiplying `values`.
    pub mu_det: f64,
    pub notes: Vec<String>,
}

/// Peak center, height and full width measured from grid data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPeak {
    pub center: f64,
    pub height: f64,
    pub fwhm: Option<f64>,
}

impl SpectrumCurve {
    /// Parabolic refinement of the largest sample, and the width between
    /// linearly interpolated half-maximum crossings.
    pub fn grid_peak(&self) -> GridPeak {
        measure_peak(&self.omega, &self.values)
    }
}

fn measure_peak(omega: &[f64], values: &[f64]) -> GridPeak {
    let n = values.len();
    let (k, &top) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("spectrum grid is empty");
    let (mut center, mut height) = (omega[k], top);
    if k > 0 && k + 1 < n {
        let (y0, y1, y2) = (values[k - 1], top, values[k + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        if denom < 0.0 {
            let s = 0.5 * (y0 - y2) / denom;
            let h = 0.5 * (omega[k + 1] - omega[k - 1]);
            center = omega[k] + s * h;
            height = y1 - 0.25 * (y0 - y2) * s;
        }
    }
    let half = 0.5 * top;
    let cross = |i: usize, j: usize| {
        omega[i] + (half - values[i]) * (omega[j] - omega[i]) / (values[j] - values[i])
    };
    let left = (1..=k)
        .rev()
        .find(|&i| values[i - 1] <= half)
        .map(|i| cross(i - 1, i));
    let right = (k..n - 1)
        .find(|&i| values[i + 1] <= half)
        .map(|i| cross(i, i + 1));
    let fwhm = match (left, right) {
        (Some(l), Some(r)) => Some(r - l),
        _ => None,
    };
    GridPeak {
        center,
        height,
        fwhm,
    }
}

/// A Lorentzian h·(w/2)² / ((w/2)² + (ω − center)²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentzian {
    pub center: f64,
    pub fwhm: f64,
    pub height: f64,
}

impl Lorentzian {
    pub fn eval(&self, omega: f64) -> f64 {
        let hw = 0.5 * self.fwhm;
        self.height * hw * hw / (hw * hw + (omega - self.center).powi(2))
    }

    fn curve(&self, omega: &[f64], mu_det: f64, notes: Vec<String>) -> SpectrumCurve {
        SpectrumCurve {
            omega: omega.to_vec(),
            values: omega.iter().map(|&w| mu_det * self.eval(w)).collect(),
            peak_center: self.center,
            peak_height: mu_det * self.height,
            fwhm: Some(self.fwhm),
            mu_det,
            notes,
        }
    }
}

/// Far-field detector at `distance` along `direction` from the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detector {
    pub distance: f64,
    pub direction: Vector3<f64>,
}

impl Detector {
    /// μ = [(δ_ij − r̂_i r̂_j) d_j / 4πr]².
    pub fn mu_det(&self, d: &Vector3<f64>) -> Result<f64> {
        let norm = self.direction.norm();
        if !(self.distance > 0.0 && norm > 0.0) {
            return Err(Error::Config(
                "detector needs a positive distance and a nonzero direction".into(),
            ));
        }
        let r = self.direction / norm;
        let projected = d - r * r.dot(d);
        Ok((projected / (4.0 * PI * self.distance)).norm_squared())
    }
}

fn require_vacuum(couplings: &CouplingSet) -> Result<()> {
    if couplings.params.thermal.is_vacuum() {
        Ok(())
    } else {
        Err(Error::Domain(
            "analytic spectra assume the field in its vacuum state".into(),
        ))
    }
}

/// Peak of the standard spectrum: center ω̃₀ + Δ₁₂, width γ_s0, height 2ω₀⁴/(γ_s0/2)².
pub fn standard_lorentzian(couplings: &CouplingSet) -> Result<Lorentzian> {
    require_vacuum(couplings)?;
    let w0 = couplings.params.omega0;
    let gamma_s0 = couplings.gamma0 + couplings.gamma12_vacuum(w0)?;
    Ok(Lorentzian {
        center: couplings.omega0_shifted() + couplings.delta12,
        fwhm: gamma_s0,
        height: 2.0 * w0.powi(4) / (0.5 * gamma_s0).powi(2),
    })
}

pub fn spectrum_standard(
    couplings: &CouplingSet,
    omega: &[f64],
    mu_det: f64,
) -> Result<SpectrumCurve> {
    Ok(standard_lorentzian(couplings)?.curve(omega, mu_det, Vec::new()))
}

/// ω̃₂ − ω₂ = 2(S_μμ(−ω₁)[b² − a²] + S₁₂(−ω₁)[b² + a²]
///             + c²[S_μμ(ω₂) − S_μμ(−ω₂) + S₁₂(ω₂) − S₁₂(−ω₂)]).
pub fn symmetric_frequency_shift(rates: &DressedRates, basis: &DressedBasis) -> f64 {
    let (a2, b2, c2) = (
        basis.a * basis.a,
        basis.b * basis.b,
        basis.c_mix * basis.c_mix,
    );
    let (w2, mw1, mw2) = (1, 2, 3);
    let shift = rates.s_self[mw1] * (b2 - a2)
        + rates.s12[mw1] * (b2 + a2)
        + c2 * (rates.s_self[w2] - rates.s_self[mw2] + rates.s12[w2] - rates.s12[mw2]);
    2.0 * shift
}

/// ω̃₂, the shifted symmetric-to-ground transition frequency.
pub fn shifted_symmetric_frequency_from(rates: &DressedRates, basis: &DressedBasis) -> f64 {
    basis.omega2 + symmetric_frequency_shift(rates, basis)
}

pub fn shifted_symmetric_frequency(couplings: &CouplingSet, basis: &DressedBasis) -> Result<f64> {
    Ok(shifted_symmetric_frequency_from(
        &DressedRates::new(couplings, basis)?,
        basis,
    ))
}

/// Peak of the dressed-picture spectrum: center ω̃₂, width γ_s(ω₂), height
/// (2aω₂²)²/(γ_s/2)².
pub fn new_lorentzian(couplings: &CouplingSet, basis: &DressedBasis) -> Result<Lorentzian> {
    require_vacuum(couplings)?;
    let (gamma_s, _) = symmetric_decay_rates(basis, couplings)?;
    let w2 = basis.omega2;
    Ok(Lorentzian {
        center: shifted_symmetric_frequency(couplings, basis)?,
        fwhm: gamma_s,
        height: (2.0 * basis.a * w2 * w2).powi(2) / (0.5 * gamma_s).powi(2),
    })
}

pub fn spectrum_new(
    couplings: &CouplingSet,
    basis: &DressedBasis,
    omega: &[f64],
    mu_det: f64,
) -> Result<SpectrumCurve> {
    Ok(new_lorentzian(couplings, basis)?.curve(omega, mu_det, Vec::new()))
}

/// Positive-frequency source operator ω₀²(σ₁⁻ + σ₂⁻) of the bare picture.
pub fn standard_source_operator(omega0: f64) -> Op {
    ops::complexify(&((ops::sigma_minus(0) + ops::sigma_minus(1)) * (omega0 * omega0)))
}

/// Σ_μ Σ_{n<m} ε_nm² σ_{μ,nm} θ_nm, with σ_{μ,nm} the matrix elements of σ_μˣ
/// between dressed states.
pub fn dressed_source_operator(basis: &DressedBasis) -> Op {
    let sx = ops::sigma_x(0) + ops::sigma_x(1);
    let mut l = Op::zeros();
    for n in 0..4 {
        for m in n + 1..4 {
            let el = (basis.vecs.column(n).transpose() * sx * basis.vecs.column(m))[(0, 0)];
            let gap = basis.offsets[n] - basis.offsets[m];
            l += basis.state(n) * basis.state(m).adjoint() * C64::new(gap * gap * el, 0.0);
        }
    }
    l
}

/// Source operator appropriate to an operator basis: the dressed field for
/// the dressed basis, the bare field otherwise.
pub fn source_operator(kind: BasisKind, basis: &DressedBasis) -> Op {
    match kind {
        BasisKind::Dressed => dressed_source_operator(basis),
        BasisKind::Bare | BasisKind::Collective => standard_source_operator(basis.omega0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSpectrumOptions {
    /// Integration window T.
    pub window: f64,
    /// Slowest decay rate of interest; sets the grid step and the window check.
    pub decay_rate: f64,
    pub points_per_decay: usize,
    pub mu_det: f64,
}

impl NumericSpectrumOptions {
    pub fn new(window: f64, decay_rate: f64) -> Self {
        NumericSpectrumOptions {
            window,
            decay_rate,
            points_per_decay: 40,
            mu_det: 1.0,
        }
    }
}

/// s(ω) = μ Σ_ij w_i w_j e^{−iω(t_i − t_j)} ⟨L†(t_i) L(t_j)⟩ by trapezoidal
/// double integration over [0, T].
///
/// Terms whose carrier is not resolved by the time step (|ω + ν| ≥ π/h) are
/// dropped, which is the rotating-wave approximation of the detector.
pub fn spectrum_numeric(
    tm: &TransferMatrix,
    source: &Op,
    rho0: &Op,
    opts: &NumericSpectrumOptions,
    omega: &[f64],
) -> Result<SpectrumCurve> {
    crate::liouvillian::check_density(rho0)?;
    if !(opts.window > 0.0 && opts.decay_rate > 0.0 && opts.points_per_decay > 0) {
        return Err(Error::Domain(
            "window, decay rate and points per decay must be positive".into(),
        ));
    }
    if omega.is_empty() {
        return Err(Error::Domain("empty frequency grid".into()));
    }
    let steps = (opts.window * opts.decay_rate * opts.points_per_decay as f64)
        .ceil()
        .max(1.0) as usize;
    let n = steps + 1;
    let h = opts.window / steps as f64;
    let weight = |i: usize| if i == 0 || i == n - 1 { 0.5 * h } else { h };
    let cutoff = PI / h;

    let prop = tm.propagator();
    let basis = &prop.basis;
    let frame = prop.frame;
    let f_int: Vec<Super> = (0..n)
        .map(|k| prop.transfer_interaction(k as f64 * h))
        .collect();
    let left = basis.left_multiplication(source);
    let probe = basis.components(&source.adjoint());
    let rho_c = basis.components(rho0);

    let mut keys: Vec<Key> = (0..16).map(Frame::key).collect();
    keys.sort();
    keys.dedup();
    let slot = |i: usize| keys.binary_search(&Frame::key(i)).unwrap();
    let mut lag = vec![vec![C64::new(0.0, 0.0); n]; keys.len()];

    for j in 0..n {
        let tj = j as f64 * h;
        let r = f_int[j] * rho_c;
        let mut slow = r;
        for i in 0..16 {
            let nu = frame.frequency(i);
            slow[i] = if nu.abs() < cutoff {
                r[i] * C64::from_polar(1.0, -nu * tj)
            } else {
                C64::new(0.0, 0.0)
            };
        }
        let y = left * slow;
        for k in 0..n - j {
            let z = f_int[k] * y;
            let w = C64::new(weight(j) * weight(j + k), 0.0);
            for i in 0..16 {
                lag[slot(i)][k] += w * probe[OperatorBasis::adjoint_index(i)] * z[i];
            }
        }
    }

    let values: Vec<f64> = omega
        .iter()
        .map(|&w| {
            let mut s = 0.0;
            for (g, key) in keys.iter().enumerate() {
                let detune = w + frame.combine(*key);
                if detune.abs() >= cutoff {
                    continue;
                }
                s += lag[g][0].re;
                for (k, z) in lag[g].iter().enumerate().skip(1) {
                    s += 2.0 * (C64::from_polar(1.0, -detune * k as f64 * h) * z).re;
                }
            }
            opts.mu_det * s
        })
        .collect();

    let peak = measure_peak(omega, &values);
    let gt = opts.window * opts.decay_rate;
    let mut notes = vec![
        format!("window decay_rate*T = {gt:.3}, step h = {h:.6e}, {n} time points"),
        format!(
            "truncation bias at the peak of a single Lorentzian: about {:.3e} relative",
            2.0 * (-0.5 * gt).exp()
        ),
        format!("terms with |omega + nu| >= pi/h = {cutoff:.6e} dropped"),
    ];
    if gt < 10.0 {
        notes.push(format!(
            "warning: decay_rate*T = {gt:.3} < 10, peak values are biased by more than 2%"
        ));
    }
    Ok(SpectrumCurve {
        omega: omega.to_vec(),
        values,
        peak_center: peak.center,
        peak_height: peak.height,
        fwhm: peak.fwhm,
        mu_det: opts.mu_det,
        notes,
    })
}
