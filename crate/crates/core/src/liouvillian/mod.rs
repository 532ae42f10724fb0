//! Generators of the standard, partial-secular and full-secular master
//! equations, and their propagation.
//!
//! Each generator is stored in the operator basis of a *frame*: four
//! orthonormal states whose energies are known in closed form. The generator
//! splits into the frame rotation −i(E_n − E_m), kept symbolically, and a
//! remainder of the size of the decay rates. The split is what allows exact
//! propagation over decay times when ω₀/γ ~ 10¹².

mod propagate;
pub mod superop;


use nalgebra::Matrix4;

use crate::coupling::CouplingSet;
use crate::dressed::{dressed_basis, DressedBasis, JumpOperatorSet};
use crate::error::{Error, Result};
use crate::ops::{self, Op, C64};
pub use propagate::{check_density, propagate, steady_state, Propagator, Trajectory};
use superop::{Super, Vec16};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Standard,
    PartialSecular,
    FullSecular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// {gg, eg, ge, ee}.
    Bare,
    /// {gg, antisymmetric, symmetric, ee}: eigenstates of the standard model.
    Collective,
    /// {ε₁, ε₂, ε₃, ε₄}.
    Dressed,
}

/// The sixteen outer products x_{4n+m} = |s_n⟩⟨s_m| of four orthonormal states.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    pub kind: BasisKind,
    /// Column n is |s_n⟩ over the bare states.
    pub states: Matrix4<f64>,
}

impl OperatorBasis {
    pub fn bare() -> Self {
        OperatorBasis {
            kind: BasisKind::Bare,
            states: Matrix4::identity(),
        }
    }

    pub fn collective() -> Self {
        OperatorBasis {
            kind: BasisKind::Collective,
            states: dressed_basis(1.0, 0.0).vecs,
        }
    }

    pub fn dressed(basis: &DressedBasis) -> Self {
        OperatorBasis {
            kind: BasisKind::Dressed,
            states: basis.vecs,
        }
    }

    fn unitary(&self) -> Op {
        ops::complexify(&self.states)
    }

    /// x_i as a bare-basis matrix.
    pub fn element(&self, i: usize) -> Op {
        let w = self.unitary();
        w.column(i / 4) * w.column(i % 4).adjoint()
    }

    /// Index j with x_j = x_i†.
    pub fn adjoint_index(i: usize) -> usize {
        4 * (i % 4) + i / 4
    }

    pub fn is_diagonal(i: usize) -> bool {
        i / 4 == i % 4
    }

    /// Components tr(x_i† O) of a bare-basis operator.
    pub fn components(&self, op: &Op) -> Vec16 {
        let w = self.unitary();
        superop::to_vec(&(w.adjoint() * op * w))
    }

    /// Bare-basis operator Σ_i v_i x_i.
    pub fn operator(&self, v: &Vec16) -> Op {
        let w = self.unitary();
        w * superop::to_op(v) * w.adjoint()
    }

    /// Matrix taking components in `self` to components in `other`.
    pub fn transfer_to(&self, other: &OperatorBasis) -> Super {
        let v = ops::complexify(&(other.states.transpose() * self.states));
        superop::sandwich(&v, &v.adjoint())
    }

    /// Matrix O′_ij = tr(x_i† O x_j) of left multiplication by a bare-basis operator.
    pub fn left_multiplication(&self, op: &Op) -> Super {
        let w = self.unitary();
        superop::left(&(w.adjoint() * op * w))
    }
}

const FRAME_P: [i32; 4] = [-1, 0, 0, 1];
const FRAME_Q: [i32; 4] = [0, -1, 1, 0];

/// Frame energies E_n = E₀ + p_n·big + q_n·small with p = (−1, 0, 0, 1) and
/// q = (0, −1, 1, 0).
///
/// Standard model: big = ω̃₀, small = Δ₁₂. Dressed models: big = η, small = C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub big: f64,
    pub small: f64,
}

impl Frame {
    /// (Δp, Δq) of element x_i = |s_n⟩⟨s_m|, i.e. of E_n − E_m.
    pub fn key(i: usize) -> (i32, i32) {
        let (n, m) = (i / 4, i % 4);
        (FRAME_P[n] - FRAME_P[m], FRAME_Q[n] - FRAME_Q[m])
    }

    pub fn combine(&self, key: (i32, i32)) -> f64 {
        let part = |k: i32, v: f64| if k == 0 { 0.0 } else { k as f64 * v };
        part(key.0, self.big) + part(key.1, self.small)
    }

    /// Bohr frequency E_n − E_m of element i.
    pub fn frequency(&self, i: usize) -> f64 {
        self.combine(Self::key(i))
    }

    /// Energy of frame state n relative to E₀.
    pub fn energy(&self, n: usize) -> f64 {
        self.combine((FRAME_P[n], FRAME_Q[n]))
    }
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub flavor: Flavor,
    /// Operator basis of the frame.
    pub basis: OperatorBasis,
    pub frame: Frame,
    /// Generator minus the frame rotation, in `basis`.
    pub slow: Super,
    /// Dressed eigenbasis of the scenario, for reporting.
    pub dressed: DressedBasis,
}

impl Liouvillian {
    /// Full generator Λ_jl = tr(x_j† Λ x_l) in the frame basis.
    pub fn gen(&self) -> Super {
        let mut g = self.slow;
        for i in 0..16 {
            g[(i, i)] += C64::new(0.0, -self.frame.frequency(i));
        }
        g
    }

    /// Full generator in another operator basis.
    pub fn matrix_in(&self, basis: &OperatorBasis) -> Super {
        let u = self.basis.transfer_to(basis);
        u * self.gen() * u.adjoint()
    }

    /// Λ(ρ) for a bare-basis operator.
    pub fn apply(&self, rho: &Op) -> Op {
        self.basis
            .operator(&(self.gen() * self.basis.components(rho)))
    }

    /// The remainder alone applied to ρ; drops the frame rotation.
    pub fn apply_slow(&self, rho: &Op) -> Op {
        self.basis
            .operator(&(self.slow * self.basis.components(rho)))
    }
}

/// Coefficients of the standard master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardCoefficients {
    /// ω̃₀ = ω₀ + Δ.
    pub omega0_shifted: f64,
    pub delta12: f64,
    /// Spontaneous single-dipole rate γ.
    pub gamma: f64,
    /// Spontaneous cross rate γ₁₂(ω₀).
    pub gamma12: f64,
    /// N(ω₀).
    pub occupation: f64,
}

impl StandardCoefficients {
    pub fn from_couplings(couplings: &CouplingSet) -> Result<Self> {
        let w0 = couplings.params.omega0;
        Ok(StandardCoefficients {
            omega0_shifted: couplings.omega0_shifted(),
            delta12: couplings.delta12,
            gamma: couplings.gamma0,
            gamma12: couplings.gamma12_vacuum(w0)?,
            occupation: couplings.occupation(w0),
        })
    }
}

pub fn build_standard(couplings: &CouplingSet) -> Result<Liouvillian> {
    let dressed = dressed_basis(couplings.params.omega0, couplings.c);
    build_standard_from(&StandardCoefficients::from_couplings(couplings)?, dressed)
}

/// Standard generator from explicit coefficients; `dressed` is only kept for reporting.
pub fn build_standard_from(k: &StandardCoefficients, dressed: DressedBasis) -> Result<Liouvillian> {
    if k.gamma12.abs() > k.gamma * (1.0 + 1e-12) {
        return Err(Error::Numerical(format!(
            "rate matrix not positive semidefinite: |γ12| = {:e} > γ = {:e}",
            k.gamma12.abs(),
            k.gamma
        )));
    }
    let basis = OperatorBasis::collective();
    let w = basis.unitary();
    let lower = [0, 1].map(|mu| w.adjoint() * ops::complexify(&ops::sigma_minus(mu)) * w);
    let raise = lower.map(|l| l.adjoint());
    let rates = [[k.gamma, k.gamma12], [k.gamma12, k.gamma]];
    let scaled = |f: f64| rates.map(|row| row.map(|r| r * f));
    let slow = superop::lindblad(&scaled(1.0 + k.occupation), &lower)
        + superop::lindblad(&scaled(k.occupation), &raise);
    Ok(Liouvillian {
        flavor: Flavor::Standard,
        basis,
        frame: Frame {
            big: k.omega0_shifted,
            small: k.delta12,
        },
        slow,
        dressed,
    })
}

/// Rates and shifts of the dressed master equations at ζ ∈ (ω₁, ω₂, −ω₁, −ω₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedRates {
    pub freqs: [f64; 4],
    pub gamma_self: [f64; 4],
    pub gamma12: [f64; 4],
    pub s_self: [f64; 4],
    pub s12: [f64; 4],
}

impl DressedRates {
    pub fn new(couplings: &CouplingSet, basis: &DressedBasis) -> Result<Self> {
        let freqs = [basis.omega1, basis.omega2, -basis.omega1, -basis.omega2];
        let mut r = DressedRates {
            freqs,
            gamma_self: [0.0; 4],
            gamma12: [0.0; 4],
            s_self: [0.0; 4],
            s12: [0.0; 4],
        };
        for (k, &w) in freqs.iter().enumerate() {
            r.gamma_self[k] = couplings.gamma_self_at(w);
            r.gamma12[k] = couplings.gamma12_at(w)?;
            r.s_self[k] = couplings.s_self(w)?;
            r.s12[k] = couplings.s_cross(w)?;
        }
        Ok(r)
    }

    /// Index into the arrays: `z` ∈ {0, 1} for ω₁, ω₂, negated when `absorb`.
    pub fn index(z: usize, absorb: bool) -> usize {
        z + if absorb { 2 } else { 0 }
    }

    pub fn gamma_matrix(&self, k: usize) -> [[f64; 2]; 2] {
        [
            [self.gamma_self[k], self.gamma12[k]],
            [self.gamma12[k], self.gamma_self[k]],
        ]
    }

    /// Γ_μν(ζ_k) = ½γ_μν + iS_μν.
    pub fn big_gamma(&self, k: usize, mu: usize, nu: usize) -> C64 {
        if mu == nu {
            C64::new(0.5 * self.gamma_self[k], self.s_self[k])
        } else {
            C64::new(0.5 * self.gamma12[k], self.s12[k])
        }
    }

    fn check_psd(&self) -> Result<()> {
        for k in 0..4 {
            if self.gamma12[k].abs() > self.gamma_self[k] * (1.0 + 1e-12) {
                return Err(Error::Numerical(format!(
                    "rate matrix not positive semidefinite at ω = {:e}",
                    self.freqs[k]
                )));
            }
        }
        Ok(())
    }
}

fn dressed_frame(basis: &DressedBasis) -> Frame {
    Frame {
        big: basis.eta,
        small: basis.c,
    }
}

pub fn build_partial_secular(
    couplings: &CouplingSet,
    basis: &DressedBasis,
    jumps: &JumpOperatorSet,
) -> Result<Liouvillian> {
    Ok(build_partial_secular_from(
        &DressedRates::new(couplings, basis)?,
        basis,
        jumps,
    ))
}

pub fn build_partial_secular_from(
    rates: &DressedRates,
    basis: &DressedBasis,
    jumps: &JumpOperatorSet,
) -> Liouvillian {
    let mut t = Super::zeros();
    for z in 0..2 {
        for zp in 0..2 {
            for mu in 0..2 {
                for nu in 0..2 {
                    let a_nz = jumps.get(nu, z);
                    let a_mzp = jumps.get(mu, zp);
                    let emit = rates.big_gamma(DressedRates::index(z, false), mu, nu);
                    let absorb = rates.big_gamma(DressedRates::index(z, true), mu, nu);
                    let e = superop::sandwich(&a_nz, &a_mzp.adjoint())
                        - superop::left(&(a_mzp.adjoint() * a_nz));
                    let a = superop::sandwich(&a_nz.adjoint(), &a_mzp)
                        - superop::left(&(a_mzp * a_nz.adjoint()));
                    t += e * emit + a * absorb;
                }
            }
        }
    }
    let slow = t + superop::hermitian_conjugate(&t);
    Liouvillian {
        flavor: Flavor::PartialSecular,
        basis: OperatorBasis::dressed(basis),
        frame: dressed_frame(basis),
        slow,
        dressed: basis.clone(),
    }
}

pub fn build_full_secular(
    couplings: &CouplingSet,
    basis: &DressedBasis,
    jumps: &JumpOperatorSet,
) -> Result<Liouvillian> {
    build_full_secular_from(&DressedRates::new(couplings, basis)?, basis, jumps)
}

pub fn build_full_secular_from(
    rates: &DressedRates,
    basis: &DressedBasis,
    jumps: &JumpOperatorSet,
) -> Result<Liouvillian> {
    rates.check_psd()?;
    let mut lamb = Op::zeros();
    let mut slow = Super::zeros();
    for k in 0..4 {
        let (z, absorb) = (k % 2, k >= 2);
        let a = [0, 1].map(|mu| {
            let op = jumps.get(mu, z);
            if absorb {
                op.adjoint()
            } else {
                op
            }
        });
        for mu in 0..2 {
            for nu in 0..2 {
                let s = if mu == nu {
                    rates.s_self[k]
                } else {
                    rates.s12[k]
                };
                lamb += a[mu].adjoint() * a[nu] * C64::new(s, 0.0);
            }
        }
        slow += superop::lindblad(&rates.gamma_matrix(k), &a);
    }
    slow += superop::commutator(&lamb);
    Ok(Liouvillian {
        flavor: Flavor::FullSecular,
        basis: OperatorBasis::dressed(basis),
        frame: dressed_frame(basis),
        slow,
        dressed: basis.clone(),
    })
}

/// Named initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Symmetric,
    Antisymmetric,
    Gg,
    Ee,
    Eps1,
}

impl InitialState {
    /// Bare-basis density matrix; `Eps1` uses the dressed ground state of `basis`.
    pub fn density(&self, basis: &DressedBasis) -> Op {
        let v = match self {
            InitialState::Symmetric => basis.state(2),
            InitialState::Antisymmetric => basis.state(1),
            InitialState::Gg => ops::ket(ops::GG),
            InitialState::Ee => ops::ket(ops::EE),
            InitialState::Eps1 => basis.state(0),
        };
        ops::projector(&v)
    }
}
