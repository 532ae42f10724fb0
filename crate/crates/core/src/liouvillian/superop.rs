//! Superoperators on 4×4 operators, stored as 16×16 matrices acting on
//! row-major component vectors: component 4n + m is ⟨n|ρ|m⟩.

use nalgebra::{SMatrix, SVector};

use crate::ops::{Op, C64};

pub type Super = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;

/// ρ ↦ AρB.
pub fn sandwich(a: &Op, b: &Op) -> Super {
    let bt = b.transpose();
    let mut s = Super::zeros();
    for n in 0..4 {
        for p in 0..4 {
            let anp = a[(n, p)];
            if anp == C64::new(0.0, 0.0) {
                continue;
            }
            for m in 0..4 {
                for q in 0..4 {
                    s[(4 * n + m, 4 * p + q)] = anp * bt[(m, q)];
                }
            }
        }
    }
    s
}

/// ρ ↦ Aρ.
pub fn left(a: &Op) -> Super {
    sandwich(a, &Op::identity())
}

/// ρ ↦ ρB.
pub fn right(b: &Op) -> Super {
    sandwich(&Op::identity(), b)
}

/// ρ ↦ −i[H, ρ].
pub fn commutator(h: &Op) -> Super {
    (left(h) - right(h)) * C64::new(0.0, -1.0)
}

/// Given T, the superoperator ρ ↦ T(ρ†)†.
pub fn hermitian_conjugate(t: &Super) -> Super {
    let swap = |i: usize| 4 * (i % 4) + i / 4;
    Super::from_fn(|i, j| t[(swap(i), swap(j))].conj())
}

/// Σ_{μν} r_{μν}(L_μ ρ L_ν† − ½{L_ν† L_μ, ρ}).
pub fn lindblad(rates: &[[f64; 2]; 2], ops: &[Op; 2]) -> Super {
    let mut s = Super::zeros();
    for mu in 0..2 {
        for nu in 0..2 {
            let r = rates[mu][nu];
            if r == 0.0 {
                continue;
            }
            let ln_dag = ops[nu].adjoint();
            let prod = ln_dag * ops[mu];
            s += (sandwich(&ops[mu], &ln_dag) - (left(&prod) + right(&prod)) * C64::new(0.5, 0.0))
                * C64::new(r, 0.0);
        }
    }
    s
}

pub fn to_vec(op: &Op) -> Vec16 {
    Vec16::from_fn(|i, _| op[(i / 4, i % 4)])
}

pub fn to_op(v: &Vec16) -> Op {
    Op::from_fn(|n, m| v[4 * n + m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{complexify, sigma_minus, sigma_x};

    fn sample() -> Op {
        Op::from_fn(|i, j| {
            C64::new(
                (i + 2 * j) as f64 * 0.3 - 1.0,
                (3 * i) as f64 * 0.1 - (j as f64) * 0.7,
            )
        })
    }

    #[test]
    fn sandwich_matches_matrix_products() {
        let a = complexify(&sigma_minus(0)) + complexify(&sigma_x(1)) * C64::new(0.0, 2.0);
        let b = sample().adjoint() * C64::new(0.5, 0.25);
        let rho = sample();
        let direct = a * rho * b;
        let lifted = to_op(&(sandwich(&a, &b) * to_vec(&rho)));
        assert!((direct - lifted).norm() < 1e-13);
    }

    #[test]
    fn conjugate_superoperator() {
        let a = sample();
        let t = sandwich(&a, &complexify(&sigma_minus(1))) * C64::new(0.2, -1.3);
        let rho = sample() * sample().transpose();
        let direct = to_op(&(t * to_vec(&rho.adjoint()))).adjoint();
        let lifted = to_op(&(hermitian_conjugate(&t) * to_vec(&rho)));
        assert!((direct - lifted).norm() < 1e-13);
    }

    #[test]
    fn lindblad_is_traceless() {
        let ops = [complexify(&sigma_minus(0)), complexify(&sigma_minus(1))];
        let l = lindblad(&[[1.0, 0.4], [0.4, 1.0]], &ops);
        let rho = sample();
        let out = to_op(&(l * to_vec(&rho)));
        assert!(out.trace().norm() < 1e-14);
    }
}
