//! Two-time correlation functions by quantum regression, and emission spectra.
//!
//! A correlation ⟨O(t)O′(t′)⟩ = tr[O e^{Λ(t−t′)}(O′ e^{Λt′}ρ₀)] is assembled
//! from parts, one per pair of frame Bohr frequencies (ν for the lag, ν′ for
//! the earlier time). Each part is a slowly varying amplitude times the exact
//! carrier e^{−iντ}e^{−iν′t′}, so envelopes stay accurate when the carriers
//! themselves cannot be resolved in double precision.

mod spectrum;


use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::liouvillian::superop::{Super, Vec16};
use crate::liouvillian::{check_density, Frame, Liouvillian, OperatorBasis, Propagator};
use crate::ops::{Op, C64};

pub use spectrum::{
    dressed_source_operator, new_lorentzian, shifted_symmetric_frequency,
    shifted_symmetric_frequency_from, source_operator, spectrum_new, spectrum_numeric,
    spectrum_standard, standard_lorentzian, standard_source_operator, symmetric_frequency_shift,
    Detector, GridPeak, Lorentzian, NumericSpectrumOptions, SpectrumCurve,
};

pub type Key = (i32, i32);

fn check_times(t: f64, tprime: f64) -> Result<()> {
    if !(t.is_finite() && tprime.is_finite()) || tprime < 0.0 {
        return Err(Error::Domain(format!(
            "times must be finite and non-negative, got t = {t}, t' = {tprime}"
        )));
    }
    if t < tprime {
        return Err(Error::Domain(format!("t = {t} precedes t' = {tprime}")));
    }
    Ok(())
}

/// tr(O X) from the components of O and X in one operator basis.
fn trace_pairing(o: &Vec16, x: &Vec16) -> C64 {
    (0..16)
        .map(|i| o[OperatorBasis::adjoint_index(i)] * x[i])
        .sum()
}

/// One term A·e^{−iν(key)τ}·e^{−iν(key′)t′} of a correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTerm {
    pub key: Key,
    pub key_prime: Key,
    pub amplitude: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationParts {
    pub frame: Frame,
    pub t: f64,
    pub tprime: f64,
    pub terms: Vec<CorrelationTerm>,
}

impl CorrelationParts {
    /// Σ A e^{−iντ} e^{−iν′t′}.
    pub fn value(&self) -> C64 {
        self.envelope((0, 0), (0, 0))
    }

    /// The correlation with the carriers of `key` and `key_prime` removed.
    pub fn envelope(&self, key: Key, key_prime: Key) -> C64 {
        let tau = self.t - self.tprime;
        self.terms
            .iter()
            .map(|term| {
                let nu = self.frame.combine((term.key.0 - key.0, term.key.1 - key.1));
                let nu_p = self.frame.combine((
                    term.key_prime.0 - key_prime.0,
                    term.key_prime.1 - key_prime.1,
                ));
                term.amplitude
                    * C64::from_polar(1.0, -nu * tau)
                    * C64::from_polar(1.0, -nu_p * self.tprime)
            })
            .sum()
    }

    /// Largest amplitude among terms other than (`key`, `key_prime`).
    pub fn max_other(&self, key: Key, key_prime: Key) -> f64 {
        self.terms
            .iter()
            .filter(|term| (term.key, term.key_prime) != (key, key_prime))
            .fold(0.0, |acc, term| acc.max(term.amplitude.norm()))
    }
}

/// The transfer matrices F(t) = e^{Λt}, F_jk(t) = tr[x_j† F(t) x_k], of one
/// generator in its frame basis.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    prop: Propagator,
}

impl TransferMatrix {
    pub fn new(l: &Liouvillian) -> Result<TransferMatrix> {
        Ok(TransferMatrix {
            prop: Propagator::new(l)?,
        })
    }

    pub fn from_propagator(prop: Propagator) -> TransferMatrix {
        TransferMatrix { prop }
    }

    pub fn propagator(&self) -> &Propagator {
        &self.prop
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.prop.basis
    }

    pub fn at(&self, t: f64) -> Result<Super> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!(
                "transfer time must be finite and non-negative, got {t}"
            )));
        }
        Ok(self.prop.transfer(t))
    }

    /// F(t) in another operator basis.
    pub fn at_in(&self, t: f64, basis: &OperatorBasis) -> Result<Super> {
        if *basis == self.prop.basis {
            return self.at(t);
        }
        let s = self.prop.basis.transfer_to(basis);
        Ok(s * self.at(t)? * s.adjoint())
    }

    /// Components of ρ(t′) = e^{Λt′}ρ₀ in the interaction picture, grouped by frame key.
    fn grouped_state(&self, rho0: &Vec16, tprime: f64) -> BTreeMap<Key, Vec16> {
        let r = self.prop.evolve_interaction(rho0, tprime);
        let mut groups: BTreeMap<Key, Vec16> = BTreeMap::new();
        for i in 0..16 {
            if r[i] != C64::new(0.0, 0.0) {
                groups.entry(Frame::key(i)).or_insert_with(Vec16::zeros)[i] = r[i];
            }
        }
        groups
    }

    /// ⟨O(t)O′(t′)⟩ split by carrier frequencies.
    pub fn correlation_parts(
        &self,
        o: &Op,
        oprime: &Op,
        rho0: &Op,
        t: f64,
        tprime: f64,
    ) -> Result<CorrelationParts> {
        check_times(t, tprime)?;
        check_density(rho0)?;
        let basis = &self.prop.basis;
        let oc = basis.components(o);
        let left = basis.left_multiplication(oprime);
        let tau = t - tprime;
        let mut terms = Vec::new();
        for (key_prime, part) in self.grouped_state(&basis.components(rho0), tprime) {
            let z = self.prop.evolve_interaction(&(left * part), tau);
            let mut by_key: BTreeMap<Key, C64> = BTreeMap::new();
            for i in 0..16 {
                *by_key.entry(Frame::key(i)).or_default() +=
                    oc[OperatorBasis::adjoint_index(i)] * z[i];
            }
            terms.extend(
                by_key
                    .into_iter()
                    .filter(|(_, a)| *a != C64::new(0.0, 0.0))
                    .map(|(key, amplitude)| CorrelationTerm {
                        key,
                        key_prime,
                        amplitude,
                    }),
            );
        }
        Ok(CorrelationParts {
            frame: self.prop.frame,
            t,
            tprime,
            terms,
        })
    }

    /// ⟨O(t)O′(t′)⟩ = 𝐎ᵀ F(t−t′) 𝐎′ F(t′) 𝛒 for t ≥ t′ ≥ 0.
    pub fn correlation(&self, o: &Op, oprime: &Op, rho0: &Op, t: f64, tprime: f64) -> Result<C64> {
        check_times(t, tprime)?;
        check_density(rho0)?;
        let basis = &self.prop.basis;
        let rho = self.prop.evolve(&basis.components(rho0), tprime);
        let x = self
            .prop
            .evolve(&(basis.left_multiplication(oprime) * rho), t - tprime);
        Ok(trace_pairing(&basis.components(o), &x))
    }

    /// C_{nmp}(t, t′) = (F(t−t′) X_m F(t′))_{np} for one diagonal x_p of
    /// `basis`; entry (n, m) of the result.
    pub fn correlation_array(
        &self,
        basis: &OperatorBasis,
        p: usize,
        t: f64,
        tprime: f64,
    ) -> Result<Super> {
        if p >= 16 || !OperatorBasis::is_diagonal(p) {
            return Err(Error::Domain(format!(
                "x_{p} is not a diagonal basis element"
            )));
        }
        check_times(t, tprime)?;
        let f_tau = self.at_in(t - tprime, basis)?;
        let v = self.at_in(tprime, basis)?.column(p).into_owned();
        let mut cols = Super::zeros();
        for m in 0..16 {
            // x_{4a+b} x_{4b+d} = x_{4a+d}, exactly
            let (a, b) = (m / 4, m % 4);
            for d in 0..4 {
                cols[(4 * a + d, m)] = v[4 * b + d];
            }
        }
        Ok(f_tau * cols)
    }
}

/// ⟨O(t)O′(t′)⟩ under the generator `l`.
pub fn two_time_correlation(
    l: &Liouvillian,
    o: &Op,
    oprime: &Op,
    rho0: &Op,
    t: f64,
    tprime: f64,
) -> Result<C64> {
    TransferMatrix::new(l)?.correlation(o, oprime, rho0, t, tprime)
}

/// C_{nmp}(t, t′) under the generator `l`.
pub fn correlation_array(
    l: &Liouvillian,
    basis: &OperatorBasis,
    p: usize,
    t: f64,
    tprime: f64,
) -> Result<Super> {
    TransferMatrix::new(l)?.correlation_array(basis, p, t, tprime)
}
