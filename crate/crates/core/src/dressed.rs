//! Eigenbasis of the Coulomb-coupled dipole Hamiltonian and its jump operators.

use nalgebra::{Matrix4, Vector3, Vector4};

use crate::coupling::{gamma_self, CouplingSet};
use crate::error::Result;
use crate::ops::{self, Op};

/// Eigensystem of H_d = ω₀(σ₁⁺σ₁⁻ + σ₂⁺σ₂⁻) + Cσ₁ˣσ₂ˣ.
///
/// Closed-form eigenvectors; the phase of |ε₄⟩ follows the sign of C
/// (positive at C = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct DressedBasis {
    pub omega0: f64,
    pub c: f64,
    /// η = √(ω₀² + C²).
    pub eta: f64,
    /// ε_n = ω₀ + offsets[n].
    pub eps: [f64; 4],
    /// Energies relative to ω₀: (−η, −C, C, η).
    pub offsets: [f64; 4],
    /// Column n is |ε_{n+1}⟩ over {gg, eg, ge, ee}.
    pub vecs: Matrix4<f64>,
    pub a: f64,
    pub b: f64,
    pub c_mix: f64,
    pub d: f64,
    /// η − C.
    pub omega1: f64,
    /// η + C.
    pub omega2: f64,
}

pub fn dressed_basis(omega0: f64, c: f64) -> DressedBasis {
    let eta = omega0.hypot(c);
    let k = c / (omega0 + eta);
    let sgn = if c < 0.0 { -1.0 } else { 1.0 };
    let n = (1.0 + k * k).sqrt();
    let r = (2.0 * (1.0 + k * k)).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;

    let mut vecs = Matrix4::zeros();
    vecs[(ops::GG, 0)] = 1.0 / n;
    vecs[(ops::EE, 0)] = -k / n;
    vecs[(ops::EG, 1)] = h;
    vecs[(ops::GE, 1)] = -h;
    vecs[(ops::EG, 2)] = h;
    vecs[(ops::GE, 2)] = h;
    vecs[(ops::EE, 3)] = sgn / n;
    vecs[(ops::GG, 3)] = sgn * k / n;

    let offsets = [-eta, -c, c, eta];
    DressedBasis {
        omega0,
        c,
        eta,
        eps: offsets.map(|s| omega0 + s),
        offsets,
        vecs,
        a: (1.0 - k) / r,
        b: sgn * (1.0 - k) / r,
        c_mix: (1.0 + k) / r,
        d: sgn * (1.0 + k) / r,
        omega1: eta - c,
        omega2: eta + c,
    }
}

impl DressedBasis {
    /// |ε_n⟩ (zero-based) as a complex bare-basis vector.
    pub fn state(&self, n: usize) -> Vector4<ops::C64> {
        self.vecs.column(n).map(|v| ops::C64::new(v, 0.0))
    }

    /// Complex change-of-basis matrix whose columns are the dressed states.
    pub fn unitary(&self) -> Op {
        ops::complexify(&self.vecs)
    }

    /// Bare-basis operator expressed in the dressed basis.
    pub fn to_dressed(&self, bare: &Op) -> Op {
        let w = self.unitary();
        w.adjoint() * bare * w
    }

    /// Dressed-basis operator expressed in the bare basis.
    pub fn to_bare(&self, dressed: &Op) -> Op {
        let w = self.unitary();
        w * dressed * w.adjoint()
    }

    /// |⟨gg|ε₁⟩|².
    pub fn ground_overlap(&self) -> f64 {
        self.vecs[(ops::GG, 0)].powi(2)
    }

    /// The two gap frequencies (ω₁, ω₂).
    pub fn gaps(&self) -> [f64; 2] {
        [self.omega1, self.omega2]
    }
}

/// Eigenoperators of H_d at frequencies ω₁ and ω₂, in the dressed basis.
///
/// `ops[mu][z]` is A_{μζ} with μ the dipole and ζ = ω_{z+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperatorSet {
    pub ops: [[Matrix4<f64>; 2]; 2],
    pub freqs: [f64; 2],
}

pub fn jump_operators(basis: &DressedBasis) -> JumpOperatorSet {
    let theta = |n: usize, m: usize, v: f64| {
        let mut t = Matrix4::zeros();
        t[(n, m)] = v;
        t
    };
    let (a, b, c, d) = (basis.a, basis.b, basis.c_mix, basis.d);
    JumpOperatorSet {
        ops: [
            [
                theta(0, 1, a) + theta(2, 3, b),
                theta(0, 2, c) + theta(1, 3, -d),
            ],
            [
                theta(0, 1, -a) + theta(2, 3, b),
                theta(0, 2, c) + theta(1, 3, d),
            ],
        ],
        freqs: [basis.omega1, basis.omega2],
    }
}

impl JumpOperatorSet {
    pub fn get(&self, mu: usize, z: usize) -> Op {
        ops::complexify(&self.ops[mu][z])
    }
}

/// ⟨ε₃|d₁ + d₂|ε₁⟩ with d_μ = d σ_μˣ, by explicit contraction.
pub fn collective_dipole_element(basis: &DressedBasis, d: &Vector3<f64>) -> Vector3<f64> {
    transition_dipole(basis, 2, 0, d)
}

/// ⟨ε_n|d₁ + d₂|ε_m⟩ (zero-based indices).
pub fn transition_dipole(
    basis: &DressedBasis,
    n: usize,
    m: usize,
    d: &Vector3<f64>,
) -> Vector3<f64> {
    let sx = ops::sigma_x(0) + ops::sigma_x(1);
    let el = (basis.vecs.column(n).transpose() * sx * basis.vecs.column(m))[(0, 0)];
    d * el
}

/// Vacuum decay rates of the symmetric state: (γ_s, γ_s0).
///
/// γ_s = 2c²[γ_μμ(ω₂) + γ₁₂(ω₂)] in the dressed picture and
/// γ_s0 = γ + γ₁₂(ω₀) with bare states.
pub fn symmetric_decay_rates(basis: &DressedBasis, couplings: &CouplingSet) -> Result<(f64, f64)> {
    let w0 = couplings.params.omega0;
    let w2 = basis.omega2;
    let g = couplings.gamma0;
    let gamma_s =
        2.0 * basis.c_mix.powi(2) * (gamma_self(w2, 0.0, g, w0) + couplings.gamma12_vacuum(w2)?);
    let gamma_s0 = g + couplings.gamma12_vacuum(w0)?;
    Ok((gamma_s, gamma_s0))
}
