use monopole_agm::monopole_curve::{CurveParams, EvalOptions, IntSet};
use monopole_agm::theta::*;
use monopole_agm::C64;
use nalgebra::{Matrix2, Vector2};
use std::f64::consts::PI;

fn tau_sample() -> Matrix2<C64> {
    Matrix2::new(C64::new(0.73, 0.22), C64::new(0.58, 0.27), C64::new(0.58, 0.27), C64::new(0.19, 0.67))
}

fn v(a: C64, b: C64) -> Vector2<C64> {
    Vector2::new(a, b)
}

#[test]
fn identity_tau_at_origin_is_positive() {
    let tau = Matrix2::new(C64::new(0.0, 1.0), C64::from(0.0), C64::from(0.0), C64::new(0.0, 1.0));
    let z = v(C64::from(0.0), C64::from(0.0));
    let t = theta2(&z, &tau, &ThetaChar::zero(), 1e-14).unwrap();
    // θ(0; iI) = θ₃(e^{−π})², with θ₃(e^{−π}) = π^{1/4}/Γ(3/4).
    let theta3 = PI.powf(0.25) / statrs::function::gamma::gamma(0.75);
    assert!(t.im.abs() < 1e-15 && (t.re - theta3 * theta3).abs() < 1e-13, "{t}");
}

#[test]
fn odd_half_characteristics_vanish_at_origin() {
    let tau = tau_sample();
    let z = v(C64::from(0.0), C64::from(0.0));
    let odd = [
        ThetaChar::new([(1, 2), (0, 1)], [(1, 2), (0, 1)]),
        ThetaChar::new([(0, 1), (1, 2)], [(0, 1), (1, 2)]),
        ThetaChar::new([(1, 2), (1, 2)], [(1, 2), (0, 1)]),
    ];
    for ch in odd {
        assert_eq!(ch.half_parity(), Some(1));
        assert!(theta2(&z, &tau, &ch, 1e-14).unwrap().norm() < 1e-13);
    }
    let even = ThetaChar::new([(1, 2), (0, 1)], [(0, 1), (0, 1)]);
    assert_eq!(even.half_parity(), Some(0));
    assert!(theta2(&z, &tau, &even, 1e-14).unwrap().norm() > 1e-3);
    assert_eq!(ThetaChar::fay_accola(1).half_parity(), None);
}

#[test]
fn truncation_is_converged() {
    let tau = tau_sample();
    let z = v(C64::new(0.3, -0.4), C64::new(-0.2, 0.9));
    let ch = ThetaChar::new([(1, 6), (-1, 3)], [(1, 2), (2, 3)]);
    let r = truncation_radius(&tau, 1e-12).unwrap();
    let x = theta2_with_radius(&z, &tau, &ch, r).unwrap();
    let y = theta2_with_radius(&z, &tau, &ch, r + 2.0).unwrap();
    assert!((x - y).norm() < 1e-12 * y.norm(), "{x} vs {y}");
}

#[test]
fn quasi_periodicity() {
    let tau = tau_sample();
    let z = v(C64::new(0.11, 0.05), C64::new(-0.37, 0.21));
    let ch = ThetaChar::new([(1, 2), (0, 1)], [(1, 3), (1, 2)]);
    let [a0, a1] = ch.alpha_f64();
    let [b0, b1] = ch.beta_f64();
    let i = C64::new(0.0, 1.0);
    for (m, n) in [([1.0, 0.0], [0.0, 0.0]), ([0.0, -2.0], [1.0, 0.0]), ([1.0, 1.0], [-1.0, 1.0])] {
        let mv = v(C64::from(m[0]), C64::from(m[1]));
        let nv = v(C64::from(n[0]), C64::from(n[1]));
        let shifted = z + mv + tau * nv;
        let lhs = theta2(&shifted, &tau, &ch, 1e-14).unwrap();
        let ntn = (nv.transpose() * tau * nv)[(0, 0)];
        let nz = (nv.transpose() * z)[(0, 0)];
        let phase = 2.0 * PI * i * (a0 * m[0] + a1 * m[1] - b0 * n[0] - b1 * n[1]);
        let factor = (phase - PI * i * ntn - 2.0 * PI * i * nz).exp();
        let rhs = factor * theta2(&z, &tau, &ch, 1e-14).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "m = {m:?}, n = {n:?}: {lhs} vs {rhs}");
    }
}

#[test]
fn non_positive_imaginary_part_is_rejected() {
    let bad = Matrix2::new(C64::new(0.0, 1.0), C64::from(0.0), C64::from(0.0), C64::new(0.0, -0.5));
    let z = v(C64::from(0.0), C64::from(0.0));
    assert!(matches!(theta2(&z, &bad, &ThetaChar::zero(), 1e-12), Err(ThetaError::NotPositiveDefinite(_))));
}

#[test]
fn es_vector_formula() {
    let tau = tau_sample();
    let u = es_vector(IntSet::PLUS, &tau);
    let want0 = C64::from(2.0 / 3.0) + 0.5 * (-3.0 * tau[(0, 0)] + tau[(1, 0)]);
    let want1 = C64::from(0.5) + 0.5 * (-3.0 * tau[(0, 1)] + tau[(1, 1)]);
    assert!((u[0] - want0).norm() < 1e-15 && (u[1] - want1).norm() < 1e-15);
    assert_eq!(es_vector(IntSet::new(0, 0, 0, 0), &tau).norm(), 0.0);
    let d = es_vector(IntSet::PLUS.scaled(2), &tau);
    assert!((d - u * C64::from(2.0)).norm() < 1e-15);
}

#[test]
fn h3_holds_at_the_tetrahedral_point() {
    let (_, scan) =
        h3_scan_curve(CurveParams::new(0.0, 7.0710678118654755), IntSet::PLUS, &EvalOptions::default(), 200).unwrap();
    assert_eq!(scan.vanishing_count(0), 2);
    assert_eq!(scan.vanishing_count(1), 2);
    assert!(scan.margin_ok());
    assert!(scan.interior_min.iter().all(|&m| m > 0.0));
}

#[test]
fn h3_scan_is_grid_stable() {
    let p = CurveParams::new(1.0, 4.43748879361789);
    let e = EvalOptions::default();
    let (_, coarse) = h3_scan_curve(p, IntSet::PLUS, &e, 400).unwrap();
    let (_, fine) = h3_scan_curve(p, IntSet::PLUS, &e, 800).unwrap();
    for k in 0..3 {
        let (x, y) = (coarse.interior_min[k], fine.interior_min[k]);
        assert!((x - y).abs() < 0.01 * y, "k = {k}: {x} vs {y}");
    }
    assert!(coarse.satisfies_h3() && fine.satisfies_h3());
}

#[test]
fn flow_grid_bounds() {
    let g = flow_grid(5).unwrap();
    assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    assert!(matches!(flow_grid(2), Err(ThetaError::Grid(2))));
}

#[test]
fn scan_points_follow_the_flow_line() {
    let p = CurveParams::new(-1.0, 9.902182531);
    let (pd, scan) = h3_scan_curve(p, IntSet::PLUS, &EvalOptions::default(), 11).unwrap();
    let u = es_vector(IntSet::PLUS, &pd.tau);
    let (z0, z1) = (scan.points[0].z, scan.points[10].z);
    assert!((z1 - z0 - u * C64::from(2.0)).norm() < 1e-12);
}
