//! Exact propagation of a frame-split generator.
//!
//! Elements are grouped into clusters of nearly equal Bohr frequency. A
//! similarity transform removes the weak coupling between clusters, after which
//! each cluster block is exponentiated on its own with the large carrier phase
//! applied analytically.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::superop::{Super, Vec16};
use super::{Flavor, Frame, Liouvillian, OperatorBasis};
use crate::error::{Error, Result};
use crate::ops::{self, Op, C64};

/// Clusters closer than this multiple of the remainder norm are merged.
const SPLIT_RATIO: f64 = 1e3;
const DECOUPLE_TOL: f64 = 1e-15;
const DECOUPLE_ACCEPT: f64 = 1e-12;
const MAX_SWEEPS: usize = 30;
const KERNEL_TOL: f64 = 1e-14;
/// Rates below this fraction of the block norm are treated as closed channels.
const RATE_FLOOR: f64 = 1e-20;

#[derive(Debug, Clone)]
struct Cluster {
    members: Vec<usize>,
    /// Decoupled block, including in-cluster frequency residuals.
    block: DMatrix<C64>,
    /// Columns of the transform belonging to this cluster.
    t_cols: DMatrix<C64>,
    /// Rows of the inverse transform belonging to this cluster.
    tinv_rows: DMatrix<C64>,
}

/// Propagator e^{Λt} of one generator.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub flavor: Flavor,
    pub basis: OperatorBasis,
    pub frame: Frame,
    clusters: Vec<Cluster>,
    /// Bohr frequency of each element minus its cluster's carrier.
    resid: [f64; 16],
    dressed: crate::dressed::DressedBasis,
}

fn cmax(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

impl Propagator {
    pub fn new(l: &Liouvillian) -> Result<Propagator> {
        let frame = l.frame;
        let slow = DMatrix::from_fn(16, 16, |i, j| l.slow[(i, j)]);
        let kappa = cmax(&slow);

        let mut order: Vec<usize> = (0..16).collect();
        order.sort_by(|&a, &b| frame.frequency(a).total_cmp(&frame.frequency(b)));
        let mut groups: Vec<Vec<usize>> = vec![vec![order[0]]];
        for w in order.windows(2) {
            if frame.frequency(w[1]) - frame.frequency(w[0]) > SPLIT_RATIO * kappa {
                groups.push(Vec::new());
            }
            groups.last_mut().unwrap().push(w[1]);
        }

        let mut cluster_of = [0usize; 16];
        let mut ref_key = Vec::with_capacity(groups.len());
        let mut resid = [0.0; 16];
        for (g, members) in groups.iter().enumerate() {
            let r = *members
                .iter()
                .min_by(|&&a, &&b| {
                    frame
                        .frequency(a)
                        .abs()
                        .total_cmp(&frame.frequency(b).abs())
                })
                .unwrap();
            let rk = Frame::key(r);
            ref_key.push(rk);
            for &i in members {
                cluster_of[i] = g;
                let k = Frame::key(i);
                resid[i] = frame.combine((k.0 - rk.0, k.1 - rk.1));
            }
        }

        let mut a = slow;
        for i in 0..16 {
            a[(i, i)] += C64::new(0.0, -resid[i]);
        }
        let gap = |p: usize, q: usize| {
            let (kp, kq) = (ref_key[p], ref_key[q]);
            C64::new(0.0, -frame.combine((kp.0 - kq.0, kp.1 - kq.1)))
        };

        let mut t = DMatrix::<C64>::identity(16, 16);
        let mut tinv = DMatrix::<C64>::identity(16, 16);
        let mut converged = groups.len() == 1;
        for _ in 0..MAX_SWEEPS {
            if converged {
                break;
            }
            let scale = cmax(&a);
            let off = (0..16)
                .flat_map(|i| (0..16).map(move |j| (i, j)))
                .filter(|&(i, j)| cluster_of[i] != cluster_of[j])
                .fold(0.0f64, |acc, (i, j)| acc.max(a[(i, j)].norm()));
            if off <= DECOUPLE_TOL * scale {
                converged = true;
                break;
            }
            let mut x = DMatrix::<C64>::zeros(16, 16);
            for (p, pm) in groups.iter().enumerate() {
                for (q, qm) in groups.iter().enumerate() {
                    if p != q {
                        solve_sylvester(&a, pm, qm, gap(p, q), &mut x)?;
                    }
                }
            }
            let gx = DMatrix::from_fn(16, 16, |i, j| {
                let (p, q) = (cluster_of[i], cluster_of[j]);
                if p == q {
                    C64::new(0.0, 0.0)
                } else {
                    gap(p, q) * x[(i, j)]
                }
            });
            let tx = DMatrix::<C64>::identity(16, 16) + &x;
            let inv = tx.clone().try_inverse().ok_or_else(|| {
                Error::Numerical("cluster decoupling transform is singular".into())
            })?;
            a = &inv * (gx + &a * &tx);
            t = &t * &tx;
            tinv = &inv * &tinv;
        }
        if !converged {
            let scale = cmax(&a);
            let off = (0..16)
                .flat_map(|i| (0..16).map(move |j| (i, j)))
                .filter(|&(i, j)| cluster_of[i] != cluster_of[j])
                .fold(0.0f64, |acc, (i, j)| acc.max(a[(i, j)].norm()));
            if off > DECOUPLE_ACCEPT * scale {
                return Err(Error::Numerical(format!(
                    "cluster decoupling stalled: off-block {off:e} against {scale:e}"
                )));
            }
        }

        let clusters = groups
            .into_iter()
            .map(|members| {
                let n = members.len();
                Cluster {
                    block: DMatrix::from_fn(n, n, |i, j| a[(members[i], members[j])]),
                    t_cols: DMatrix::from_fn(16, n, |i, j| t[(i, members[j])]),
                    tinv_rows: DMatrix::from_fn(n, 16, |i, j| tinv[(members[i], j)]),
                    members,
                }
            })
            .collect();
        Ok(Propagator {
            flavor: l.flavor,
            basis: l.basis.clone(),
            frame,
            clusters,
            resid,
            dressed: l.dressed.clone(),
        })
    }

    /// e^{−i(E_n − E_m)t} built from per-state phases, so that rounding in the
    /// large phases acts as a diagonal unitary.
    pub fn phase(&self, i: usize, t: f64) -> C64 {
        let (n, m) = (i / 4, i % 4);
        let u = |k: usize| C64::from_polar(1.0, -self.frame.energy(k) * t);
        u(n) * u(m).conj()
    }

    /// Bohr frequency E_n − E_m of element i.
    pub fn frequency(&self, i: usize) -> f64 {
        self.frame.frequency(i)
    }

    /// Components of e^{Λt} v.
    pub fn evolve(&self, v: &Vec16, t: f64) -> Vec16 {
        let v = DVector::from_fn(16, |i, _| v[i]);
        let mut y = DVector::<C64>::zeros(16);
        for c in &self.clusters {
            let z = (&c.block * C64::new(t, 0.0)).exp() * (&c.tinv_rows * &v);
            y += &c.t_cols * self.carrier(c, z, t);
        }
        Vec16::from_fn(|i, _| y[i])
    }

    /// Components of e^{Λt} v in the frame's interaction picture: entry i is
    /// divided by e^{−i(E_n − E_m)t}.
    pub fn evolve_interaction(&self, v: &Vec16, t: f64) -> Vec16 {
        let mut out = self.evolve(v, t);
        for i in 0..16 {
            out[i] /= self.phase(i, t);
        }
        out
    }

    fn carrier(&self, c: &Cluster, mut z: DVector<C64>, t: f64) -> DVector<C64> {
        for (k, &i) in c.members.iter().enumerate() {
            z[k] *= self.phase(i, t) * C64::from_polar(1.0, self.resid[i] * t);
        }
        z
    }

    /// Transfer matrix F(t) = e^{Λt} in the frame basis.
    pub fn transfer(&self, t: f64) -> Super {
        let mut f = DMatrix::<C64>::zeros(16, 16);
        for c in &self.clusters {
            let mut et = (&c.block * C64::new(t, 0.0)).exp() * &c.tinv_rows;
            for (k, &i) in c.members.iter().enumerate() {
                let ph = self.phase(i, t) * C64::from_polar(1.0, self.resid[i] * t);
                et.row_mut(k).iter_mut().for_each(|z| *z *= ph);
            }
            f += &c.t_cols * et;
        }
        Super::from_fn(|i, j| f[(i, j)])
    }

    /// F(t) in the interaction picture: row i divided by e^{−i(E_n − E_m)t}.
    pub fn transfer_interaction(&self, t: f64) -> Super {
        let mut f = self.transfer(t);
        for i in 0..16 {
            let ph = self.phase(i, t).conj();
            for j in 0..16 {
                f[(i, j)] *= ph;
            }
        }
        f
    }

    /// Number of clusters the generator split into.
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn steady_state(&self) -> Result<Op> {
        let zero = self
            .clusters
            .iter()
            .find(|c| c.members.iter().any(|&i| OperatorBasis::is_diagonal(i)))
            .ok_or_else(|| Error::Numerical("no cluster holds the populations".into()))?;
        let full = if let Some(w) = rate_matrix(zero) {
            let classes = closed_classes(&w);
            if classes != 1 {
                return Err(Error::DegenerateSteadyState(classes));
            }
            let p = stationary_distribution(&w);
            &zero.t_cols * DVector::from_iterator(p.len(), p.into_iter().map(|x| C64::new(x, 0.0)))
        } else {
            let svd = zero.block.clone().svd(false, true);
            let smax = svd.singular_values.max();
            let kernel_dim = svd
                .singular_values
                .iter()
                .filter(|&&s| s <= KERNEL_TOL * smax)
                .count();
            if smax == 0.0 || kernel_dim != 1 {
                return Err(Error::DegenerateSteadyState(if smax == 0.0 {
                    zero.members.len()
                } else {
                    kernel_dim
                }));
            }
            let (idx, _) = svd.singular_values.argmin();
            let v_t = svd
                .v_t
                .as_ref()
                .ok_or_else(|| Error::Numerical("SVD did not return V".into()))?;
            &zero.t_cols * v_t.row(idx).adjoint()
        };
        let trace: C64 = (0..4).map(|d| full[5 * d]).sum();
        if trace.norm() == 0.0 {
            return Err(Error::Numerical(
                "stationary kernel vector is traceless".into(),
            ));
        }
        let v = Vec16::from_fn(|i, _| full[i] / trace);
        let rho = self.basis.operator(&v);
        Ok((rho + rho.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn propagate(&self, rho0: &Op, times: &[f64]) -> Result<Trajectory> {
        check_density(rho0)?;
        if times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::Domain(
                "times must be finite and non-negative".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("times must be sorted".into()));
        }
        let v0 = self.basis.components(rho0);
        let mut traj = Trajectory::with_capacity(self.flavor, times.len());
        for &t in times {
            let rho = if t == 0.0 {
                *rho0
            } else {
                self.basis.operator(&self.evolve(&v0, t))
            };
            traj.push(t, rho, &self.dressed)?;
        }
        Ok(traj)
    }
}

/// Transition rates w[i][j] (j → i) when the block couples populations only
/// and has the sign pattern of a classical rate matrix.
fn rate_matrix(c: &Cluster) -> Option<Vec<Vec<f64>>> {
    if !c.members.iter().all(|&i| OperatorBasis::is_diagonal(i)) {
        return None;
    }
    let scale = cmax(&c.block);
    let n = c.members.len();
    let mut w = vec![vec![0.0; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        for (j, wij) in row.iter_mut().enumerate() {
            let z = c.block[(i, j)];
            if z.im.abs() > 1e-12 * scale || (i != j && z.re < -1e-12 * scale) {
                return None;
            }
            if i != j && z.re > RATE_FLOOR * scale {
                *wij = z.re;
            }
        }
    }
    Some(w)
}

/// Number of closed communicating classes of the chain with rates w[i][j] (j → i).
fn closed_classes(w: &[Vec<f64>]) -> usize {
    let n = w.len();
    let mut reach = vec![vec![false; n]; n];
    for j in 0..n {
        reach[j][j] = true;
        for i in 0..n {
            if w[i][j] > 0.0 {
                reach[j][i] = true;
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if reach[a][k] && reach[k][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    // a state is recurrent when everything it reaches can reach it back
    let recurrent: Vec<bool> = (0..n)
        .map(|a| (0..n).all(|b| !reach[a][b] || reach[b][a]))
        .collect();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for a in 0..n {
        if recurrent[a] && !seen[a] {
            classes += 1;
            for b in 0..n {
                if reach[a][b] && reach[b][a] {
                    seen[b] = true;
                }
            }
        }
    }
    classes
}

/// Stationary distribution by Grassmann–Taksar–Heyman elimination, which
/// involves no subtractions and so resolves very small rates.
fn stationary_distribution(w: &[Vec<f64>]) -> Vec<f64> {
    let n = w.len();
    // q[i][j]: rate i → j
    let mut q: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| w[j][i]).collect()).collect();
    for k in (1..n).rev() {
        let s: f64 = (0..k).map(|j| q[k][j]).sum();
        for row in q.iter_mut().take(k) {
            row[k] /= s;
        }
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    q[i][j] += q[i][k] * q[k][j];
                }
            }
        }
    }
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    for k in 1..n {
        p[k] = (0..k).map(|i| p[i] * q[i][k]).sum();
    }
    let total: f64 = p.iter().sum();
    p.iter().map(|x| x / total).collect()
}

/// Solves g X + A_pp X − X A_qq = −A_pq for the (p, q) block of X.
fn solve_sylvester(
    a: &DMatrix<C64>,
    pm: &[usize],
    qm: &[usize],
    g: C64,
    x: &mut DMatrix<C64>,
) -> Result<()> {
    let (np, nq) = (pm.len(), qm.len());
    let idx = |i: usize, j: usize| i * nq + j;
    let mut m = DMatrix::<C64>::zeros(np * nq, np * nq);
    let mut rhs = DVector::<C64>::zeros(np * nq);
    for i in 0..np {
        for j in 0..nq {
            let r = idx(i, j);
            rhs[r] = -a[(pm[i], qm[j])];
            m[(r, r)] += g;
            for k in 0..np {
                m[(r, idx(k, j))] += a[(pm[i], pm[k])];
            }
            for l in 0..nq {
                m[(r, idx(i, l))] -= a[(qm[l], qm[j])];
            }
        }
    }
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("cluster coupling equation is singular".into()))?;
    for i in 0..np {
        for j in 0..nq {
            x[(pm[i], qm[j])] = sol[idx(i, j)];
        }
    }
    Ok(())
}

/// Checks Hermiticity, unit trace and positivity of a bare-basis density matrix.
pub fn check_density(rho: &Op) -> Result<()> {
    let scale = rho.norm().max(1.0);
    if (rho - rho.adjoint()).norm() > 1e-12 * scale {
        return Err(Error::Domain("density matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Domain(format!("density matrix trace is {tr}")));
    }
    let min = min_eigenvalue(rho);
    if min < -1e-10 {
        return Err(Error::Domain(format!(
            "density matrix has eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part.
pub(crate) fn min_eigenvalue(rho: &Op) -> f64 {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.min()
}

/// Sampled evolution with the populations of interest.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Bare-basis density matrices.
    pub states: Vec<Op>,
    /// Symmetric state.
    pub p_s: Vec<f64>,
    /// |gg⟩ for the standard model, |ε₁⟩ otherwise.
    pub p_stationary: Vec<f64>,
    pub p_gg: Vec<f64>,
    pub p_eps1: Vec<f64>,
    pub p_eps2: Vec<f64>,
    pub min_eigenvalue: Vec<f64>,
    flavor: Option<Flavor>,
}

fn population(rho: &Op, v: &nalgebra::Vector4<C64>) -> f64 {
    (v.adjoint() * rho * v)[(0, 0)].re
}

impl Trajectory {
    fn with_capacity(flavor: Flavor, n: usize) -> Self {
        Trajectory {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            flavor: Some(flavor),
            ..Default::default()
        }
    }

    fn push(&mut self, t: f64, rho: Op, dressed: &crate::dressed::DressedBasis) -> Result<()> {
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite state at t = {t:e}")));
        }
        let gg = population(&rho, &ops::ket(ops::GG));
        let e1 = population(&rho, &dressed.state(0));
        self.times.push(t);
        self.p_s.push(population(&rho, &dressed.state(2)));
        self.p_gg.push(gg);
        self.p_eps1.push(e1);
        self.p_eps2.push(population(&rho, &dressed.state(1)));
        self.p_stationary
            .push(if self.flavor == Some(Flavor::Standard) {
                gg
            } else {
                e1
            });
        self.min_eigenvalue.push(min_eigenvalue(&rho));
        self.states.push(rho);
        Ok(())
    }

    /// First time at which p_stationary overtakes p_s, linearly interpolated.
    pub fn crossover_time(&self) -> Option<f64> {
        let diff: Vec<f64> = self
            .p_stationary
            .iter()
            .zip(&self.p_s)
            .map(|(g, s)| g - s)
            .collect();
        if diff.first().is_some_and(|&d| d >= 0.0) {
            return self.times.first().copied();
        }
        diff.windows(2)
            .zip(self.times.windows(2))
            .find_map(|(d, t)| {
                (d[0] < 0.0 && d[1] >= 0.0).then(|| t[0] + (t[1] - t[0]) * (-d[0]) / (d[1] - d[0]))
            })
    }
}

pub fn propagate(l: &Liouvillian, rho0: &Op, times: &[f64]) -> Result<Trajectory> {
    Propagator::new(l)?.propagate(rho0, times)
}

pub fn steady_state(l: &Liouvillian) -> Result<Op> {
    Propagator::new(l)?.steady_state()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_distribution_of_three_state_cycle() {
        // 0 → 1 at 2, 1 → 2 at 3, 2 → 0 at 1; flux balance gives π ∝ (1/2, 1/3, 1)
        let mut w = vec![vec![0.0; 3]; 3];
        w[1][0] = 2.0;
        w[2][1] = 3.0;
        w[0][2] = 1.0;
        assert_eq!(closed_classes(&w), 1);
        let p = stationary_distribution(&w);
        let z = 0.5 + 1.0 / 3.0 + 1.0;
        for (got, want) in p.iter().zip([0.5 / z, 1.0 / 3.0 / z, 1.0 / z]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn tiny_rates_are_resolved() {
        // two-state chain with a 1e-17 leak into an absorbing state
        let w = vec![vec![0.0, 1e-17], vec![0.0, 0.0]];
        assert_eq!(closed_classes(&w), 1);
        assert_eq!(stationary_distribution(&w), vec![1.0, 0.0]);
    }

    #[test]
    fn closed_classes_counts_traps() {
        let mut w = vec![vec![0.0; 4]; 4];
        w[0][1] = 1.0;
        w[3][2] = 1.0;
        assert_eq!(closed_classes(&w), 2);
        assert_eq!(closed_classes(&vec![vec![0.0; 4]; 4]), 4);
    }
}
