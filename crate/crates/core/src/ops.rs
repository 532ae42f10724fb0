//! Fixed two-dipole operators in the bare product basis.
//!
//! Bare states are ordered {gg, eg, ge, ee}: index = a + 2b where a (b) is 1
//! when the first (second) dipole is excited.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Op = Matrix4<C64>;

pub const GG: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const EE: usize = 3;

fn excited(index: usize, mu: usize) -> bool {
    (index >> mu) & 1 == 1
}

/// σ_μ⁻ for dipole `mu` ∈ {0, 1}.
pub fn sigma_minus(mu: usize) -> Matrix4<f64> {
    assert!(mu < 2, "dipole index must be 0 or 1");
    let mut m = Matrix4::zeros();
    for j in 0..4 {
        if excited(j, mu) {
            m[(j & !(1 << mu), j)] = 1.0;
        }
    }
    m
}

pub fn sigma_plus(mu: usize) -> Matrix4<f64> {
    sigma_minus(mu).transpose()
}

/// σ_μˣ = σ_μ⁺ + σ_μ⁻.
pub fn sigma_x(mu: usize) -> Matrix4<f64> {
    sigma_minus(mu) + sigma_plus(mu)
}

/// σ_μʸ = −i(σ_μ⁺ − σ_μ⁻).
pub fn sigma_y(mu: usize) -> Op {
    let k = sigma_plus(mu) - sigma_minus(mu);
    k.map(|v| C64::new(0.0, -v))
}

/// Bare dipole Hamiltonian ω₀(σ₁⁺σ₁⁻ + σ₂⁺σ₂⁻) + C σ₁ˣσ₂ˣ.
pub fn bare_hamiltonian(omega0: f64, c: f64) -> Matrix4<f64> {
    let n = sigma_plus(0) * sigma_minus(0) + sigma_plus(1) * sigma_minus(1);
    n * omega0 + sigma_x(0) * sigma_x(1) * c
}

pub fn complexify(m: &Matrix4<f64>) -> Op {
    m.map(|v| C64::new(v, 0.0))
}

/// |n⟩⟨m| in whichever basis the indices refer to.
pub fn outer(n: usize, m: usize) -> Op {
    let mut o = Op::zeros();
    o[(n, m)] = C64::new(1.0, 0.0);
    o
}

pub fn projector(v: &Vector4<C64>) -> Op {
    v * v.adjoint()
}

/// Bare state vector of the given index.
pub fn ket(index: usize) -> Vector4<C64> {
    let mut v = Vector4::zeros();
    v[index] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowering_operators_act_on_the_right_dipole() {
        let s1 = sigma_minus(0);
        assert_eq!(s1[(GG, EG)], 1.0);
        assert_eq!(s1[(GE, EE)], 1.0);
        assert_eq!(s1.sum(), 2.0);
        let s2 = sigma_minus(1);
        assert_eq!(s2[(GG, GE)], 1.0);
        assert_eq!(s2[(EG, EE)], 1.0);
        assert_eq!(s2.sum(), 2.0);
        // dipoles commute
        assert_eq!(s1 * s2, s2 * s1);
    }

    #[test]
    fn pauli_algebra() {
        for mu in 0..2 {
            let x = complexify(&sigma_x(mu));
            let y = sigma_y(mu);
            let anti = x * y + y * x;
            assert!(anti.norm() < 1e-15);
            // σ_y² restricted to the dipole is the identity
            assert!((y * y - Op::identity()).norm() < 1e-15);
        }
    }

    #[test]
    fn bare_hamiltonian_levels() {
        let h = bare_hamiltonian(2.0, 0.0);
        assert_eq!(h[(GG, GG)], 0.0);
        assert_eq!(h[(EG, EG)], 2.0);
        assert_eq!(h[(EE, EE)], 4.0);
        let hc = bare_hamiltonian(2.0, 0.5);
        assert_eq!(hc[(GG, EE)], 0.5);
        assert_eq!(hc[(EG, GE)], 0.5);
    }
}
