use super::*;
use crate::units::{rydberg_defaults, to_natural, Temperature};
use approx::assert_relative_eq;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn defaults_at(multiple: f64) -> NaturalParams {
    let cfg = rydberg_defaults(50);
    let ra = cfg.rydberg_radius().unwrap();
    to_natural(&cfg.with_separation_length(multiple * ra)).unwrap()
}

/// Scenario with d = x̂ and ω₀ = 1 in arbitrary units, separation ωR = x along ẑ.
fn unit_params(x: f64) -> NaturalParams {
    NaturalParams {
        omega0: 1.0,
        d: Vector3::new(1.0, 0.0, 0.0),
        rvec: Vector3::new(0.0, 0.0, x),
        rhat: Vector3::z(),
        thermal: Thermal::Vacuum,
        cutoff: 1e6,
        pv_regulator_eps: 1e-9,
    }
}

#[test]
fn tau_at_half_wavelength() {
    let w = 2.0;
    let r = Vector3::new(0.0, 0.0, PI / w);
    let t = tau_tensor(w, &r).unwrap();
    let expect = w.powi(3) / (2.0 * PI) * (-1.0 / (PI * PI));
    assert_relative_eq!(t[(0, 0)], expect, max_relative = 1e-13);
    assert_eq!(t[(0, 1)], 0.0);
    assert_eq!(t[(1, 0)], 0.0);
    assert!((t - t.transpose()).norm() == 0.0);
}

#[test]
fn tau_near_zone_limit_for_any_dipole() {
    let w = 1.3;
    let r = Vector3::new(0.3, -0.2, 0.9).normalize() * (1e-4 / w);
    for d in [
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.2, 0.7, -0.4),
        Vector3::new(0.3, -0.2, 0.9),
    ] {
        let t = tau_tensor(w, &r).unwrap();
        let v = (d.transpose() * t * d)[(0, 0)];
        let gamma = w.powi(3) * d.norm_squared() / (3.0 * PI);
        assert!(rel(v, gamma) < 1e-7, "{v} {gamma}");
    }
}

#[test]
fn series_and_direct_forms_join_smoothly() {
    for x in [0.49f64, 0.5, 0.51] {
        let direct = x.cos() / (x * x) - x.sin() / (x * x * x);
        assert!(rel(tau_near(x), direct) < 1e-13);
    }
    assert_relative_eq!(tau_near(0.0), -1.0 / 3.0, max_relative = 1e-15);
}

#[test]
fn v_tensor_examples() {
    let w = 3.0;
    let r = Vector3::new(0.0, 0.0, 0.5 * PI / w);
    let v = v_tensor(w, &r).unwrap();
    assert_relative_eq!(v[(0, 0)], w.powi(3) / PI.powi(3), max_relative = 1e-13);

    let rn = Vector3::new(0.0, 0.0, 1e-4 / w);
    let d = Vector3::new(0.0, 2.0, 0.0);
    let dv = (d.transpose() * v_tensor(w, &rn).unwrap() * d)[(0, 0)];
    let c = d.norm_squared() / (4.0 * PI * rn.norm().powi(3));
    assert!(rel(dv, c) < 1e-7);
    assert_relative_eq!(delta12(w, &d, &rn).unwrap(), dv, max_relative = 1e-12);
}

#[test]
fn tensors_reject_zero_separation() {
    let z = Vector3::zeros();
    assert!(matches!(tau_tensor(1.0, &z), Err(Error::Domain(_))));
    assert!(matches!(v_tensor(1.0, &z), Err(Error::Domain(_))));
    assert!(matches!(
        static_coulomb(&Vector3::x(), &z),
        Err(Error::Domain(_))
    ));
    assert!(tau_tensor(0.0, &Vector3::z()).is_err());
}

#[test]
fn coulomb_orientations() {
    let r = Vector3::new(0.0, 0.0, 2.0);
    let perp = static_coulomb(&Vector3::new(3.0, 0.0, 0.0), &r).unwrap();
    assert_relative_eq!(perp, 9.0 / (4.0 * PI * 8.0), max_relative = 1e-15);
    let para = static_coulomb(&Vector3::new(0.0, 0.0, 3.0), &r).unwrap();
    assert_relative_eq!(para, -9.0 / (2.0 * PI * 8.0), max_relative = 1e-15);
}

#[test]
fn rydberg_coupling_magnitudes() {
    let p = defaults_at(10.0);
    let c = static_coulomb(&p.d, &p.rvec).unwrap();
    assert!(rel(c, 3.72e10) < 1e-2, "{c}");
    let g = single_decay_rate(p.omega0, &p.d);
    assert!(rel(gamma_self(7.57e10, 0.0, g, p.omega0), 3.23e-2) < 1e-2);
}

#[test]
fn rate_forms() {
    assert_eq!(gamma_self(5.0, 0.0, 2.0, 5.0), 2.0);
    assert_eq!(gamma_self(10.0, 0.0, 2.0, 5.0), 4.0);
    assert_eq!(gamma_self(-10.0, 0.0, 2.0, 5.0), 0.0);
    assert_eq!(gamma_self(-10.0, 0.5, 2.0, 5.0), 2.0);

    let d = Vector3::new(2.0, 0.0, 0.0);
    let w0 = 1.7;
    let r = Vector3::new(0.0, 0.0, PI / w0);
    let g = gamma_cross(w0, 0.0, &d, &r, w0).unwrap();
    assert_relative_eq!(
        g,
        -4.0 * w0.powi(3) / (2.0 * PI.powi(3)),
        max_relative = 1e-13
    );
    assert_eq!(gamma_cross(-w0, 0.0, &d, &r, w0).unwrap(), 0.0);

    // near-zone: γ₁₂(ω) → γ_μμ(ω) for every ω
    let rn = Vector3::new(0.0, 0.0, 1e-4 / (3.0 * w0));
    let gamma = single_decay_rate(w0, &d);
    for w in [0.5 * w0, w0, 3.0 * w0] {
        let gc = gamma_cross(w, 0.2, &d, &rn, w0).unwrap();
        assert!(rel(gc, gamma_self(w, 0.2, gamma, w0)) < 1e-7);
    }
}

#[test]
fn transfer_minus_transverse_is_coulomb() {
    let d = Vector3::new(0.4, -1.1, 0.3);
    let dir = Vector3::new(0.1, 0.5, 1.0).normalize();
    for i in 0..=40 {
        let x = 10f64.powf(-2.0 + 0.1 * i as f64);
        let r = dir * x;
        let diff = delta12(1.0, &d, &r).unwrap() - delta12_transverse(1.0, &d, &r).unwrap();
        let c = static_coulomb(&d, &r).unwrap();
        assert!(rel(diff, c) < 1e-12, "x = {x}: {:e}", rel(diff, c));
    }
}

#[test]
fn rate_matrix_is_psd_over_separations() {
    for i in 0..60 {
        let x = 10f64.powf(-4.0 + 0.1 * i as f64);
        for d in [Vector3::x(), Vector3::z(), Vector3::new(1.0, 1.0, 1.0)] {
            let r = Vector3::new(0.0, 0.0, x);
            let g = gamma_cross(1.0, 0.0, &d, &r, 1.0).unwrap();
            assert!(g.abs() <= single_decay_rate(1.0, &d) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn far_zone_transfer_falls_like_inverse_distance() {
    let d = Vector3::x();
    let mut peak: f64 = 0.0;
    for i in 0..200 {
        let x = 10.0 + 90.0 * i as f64 / 199.0;
        let v = delta12(1.0, &d, &Vector3::new(0.0, 0.0, x)).unwrap() * x;
        peak = peak.max(v.abs());
    }
    // envelope of −cos x/(4π) plus O(1/x) corrections
    assert!(peak < 1.0 / (4.0 * PI) * 1.2);
    assert!(peak > 1.0 / (4.0 * PI) * 0.8);
}

/// Vacuum closed form of the self shift with a hard cutoff.
fn s_self_oracle(omega: f64, gamma: f64, w0: f64, cutoff: f64) -> f64 {
    gamma / (2.0 * PI * w0) * (-cutoff + omega * (omega.abs() / (cutoff - omega).abs()).ln())
}

#[test]
fn self_shift_matches_vacuum_closed_form() {
    let p = defaults_at(10.0);
    let g = single_decay_rate(p.omega0, &p.d);
    for w in [p.omega0, -p.omega0, 7.57e10, -1.32e9] {
        let s = pv_shift_self(w, &p).unwrap();
        let o = s_self_oracle(w, g, p.omega0, p.cutoff);
        assert!(rel(s, o) < 1e-10, "{w}: {s} {o}");
    }
}

#[test]
fn self_shift_difference_is_single_dipole_shift() {
    let p = defaults_at(10.0);
    let g = single_decay_rate(p.omega0, &p.d);
    let diff = pv_shift_self(p.omega0, &p).unwrap() - pv_shift_self(-p.omega0, &p).unwrap();
    let lam = p.cutoff;
    let oracle = -g / (2.0 * PI) * ((lam * lam - p.omega0 * p.omega0) / (p.omega0 * p.omega0)).ln();
    assert!(rel(diff, oracle) < 1e-3, "{diff} {oracle}");
    assert!(rel(delta_single(&p).unwrap(), oracle) < 1e-12);
}

#[test]
fn thermal_self_shift_difference_matches_shift_quadrature() {
    let mut cfg = rydberg_defaults(50);
    // k_B T ≈ 3ħω₀
    cfg.temperature = Temperature::Beta(1.0 / (3.0 * crate::units::HBAR * 1e10));
    let p = to_natural(&cfg).unwrap();
    let diff = pv_shift_self(p.omega0, &p).unwrap() - pv_shift_self(-p.omega0, &p).unwrap();
    let delta = delta_single(&p).unwrap();
    assert!(rel(diff, delta) < 1e-3, "{diff} {delta}");
    // thermal correction is noticeable
    let vac = delta_single_vacuum(single_decay_rate(p.omega0, &p.d), p.omega0, p.cutoff);
    assert!(rel(delta, vac) > 1e-6);
}

#[test]
fn negative_frequency_vacuum_has_no_pole() {
    let p = defaults_at(10.0);
    let g = single_decay_rate(p.omega0, &p.d);
    let w = -p.omega0;
    // plain composite Gauss–Legendre with no special treatment
    let f = |x: f64| g / (2.0 * PI) * x / p.omega0 / (w - x);
    let mut edges = vec![0.0];
    let mut e = p.omega0 / 64.0;
    while e < p.cutoff {
        edges.push(e);
        e *= 1.5;
    }
    edges.push(p.cutoff);
    let rule = gauss_quad::GaussLegendre::new(30).unwrap();
    let plain: f64 = edges
        .windows(2)
        .map(|ab| rule.integrate(ab[0], ab[1], f))
        .sum();
    let pv = pv_shift_self(w, &p).unwrap();
    assert!(rel(pv, plain) < 1e-10, "{pv} {plain}");
}

#[test]
fn doubling_cutoff_shifts_by_log_tail() {
    let p = defaults_at(10.0);
    let mut q = p.clone();
    q.cutoff *= 2.0;
    q.pv_regulator_eps *= 0.5;
    let d1 = pv_shift_self(p.omega0, &p).unwrap() - pv_shift_self(-p.omega0, &p).unwrap();
    let d2 = pv_shift_self(q.omega0, &q).unwrap() - pv_shift_self(-q.omega0, &q).unwrap();
    let g = single_decay_rate(p.omega0, &p.d);
    let (w, l) = (p.omega0, p.cutoff);
    // (γ/π)∫_Λ^{2Λ} ω/(ω₀²−ω²) dω
    let tail = -g / (2.0 * PI) * ((4.0 * l * l - w * w) / (l * l - w * w)).ln();
    assert!(rel(d2 - d1, tail) < 1e-3, "{} {tail}", d2 - d1);
}

#[test]
fn shift_arguments_are_checked() {
    let p = defaults_at(10.0);
    assert!(matches!(pv_shift_self(0.0, &p), Err(Error::Domain(_))));
    assert!(matches!(
        pv_shift_self(2.0 * p.cutoff, &p),
        Err(Error::Domain(_))
    ));
    assert!(matches!(pv_shift_cross(0.0, &p), Err(Error::Domain(_))));
}

#[test]
fn cross_shifts_sum_to_transverse_transfer() {
    for p in [defaults_at(10.0), unit_params(1.0)] {
        let sum = pv_shift_cross(p.omega0, &p).unwrap() + pv_shift_cross(-p.omega0, &p).unwrap();
        let closed = delta12_transverse(p.omega0, &p.d, &p.rvec).unwrap();
        assert!(rel(sum, closed) < 1e-2, "{sum} {closed}");
    }
}

#[test]
fn cold_field_matches_vacuum() {
    let p = defaults_at(10.0);
    let mut q = p.clone();
    q.thermal = Thermal::Beta(1e3 / p.omega0);
    for w in [p.omega0, -p.omega0] {
        let a = pv_shift_cross(w, &p).unwrap();
        let b = pv_shift_cross(w, &q).unwrap();
        assert!(rel(b, a) < 1e-8);
    }
}

#[test]
fn transfer_quadrature_matches_closed_form() {
    for x in [0.1, 1.0, 10.0] {
        let p = unit_params(x);
        let q = delta12_quadrature(&p).unwrap();
        let c = delta12(1.0, &p.d, &p.rvec).unwrap();
        assert!(rel(q, c) < 1e-3, "x = {x}: {q} {c}");
    }
}

#[test]
fn coupling_set_is_consistent() {
    let p = defaults_at(10.0);
    let cs = CouplingSet::new(&p).unwrap();
    assert_relative_eq!(
        cs.delta12 - cs.delta12_transverse,
        cs.c,
        max_relative = 1e-12
    );
    assert!(cs.c / cs.gamma0 > 1e10);
    assert_eq!(cs.gamma_self_at(cs.params.omega0), cs.gamma0);
    assert_eq!(cs.gamma12_at(-cs.params.omega0).unwrap(), 0.0);
    cs.check_rate_matrix(cs.params.omega0).unwrap();
    assert!(cs.delta < 0.0);
}

proptest! {
    #[test]
    fn tau_is_symmetric_and_bounded(
        x in 1e-3f64..50.0,
        th in 0.0f64..PI,
        ph in 0.0f64..(2.0 * PI),
    ) {
        let r = Vector3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()) * x;
        let t = tau_tensor(1.0, &r).unwrap();
        prop_assert!((t - t.transpose()).amax() < 1e-15);
        // every diagonal projection stays within the single-dipole rate
        for d in [Vector3::<f64>::x(), Vector3::y(), Vector3::z()] {
            let v = (d.transpose() * t * d)[(0, 0)];
            prop_assert!(v.abs() <= 1.0 / (3.0 * PI) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn coulomb_scales_as_inverse_cube(x in 0.1f64..10.0, s in 0.5f64..4.0) {
        let d = Vector3::new(0.3, 0.4, 0.5);
        let r = Vector3::new(0.2, -0.1, 1.0).normalize() * x;
        let a = static_coulomb(&d, &r).unwrap();
        let b = static_coulomb(&d, &(r * s)).unwrap();
        prop_assert!(rel(b * s.powi(3), a) < 1e-13);
    }
}
