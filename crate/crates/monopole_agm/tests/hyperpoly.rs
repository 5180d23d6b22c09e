use approx::assert_relative_eq;
use monopole_agm::hyperpoly::{
    bracket, bracket_coeffs, delta_det, resolvent_roots, resolvent_triple, HyperpolyError, QuadCoeffs,
};
use monopole_agm::{Quadratic, SexticModel, C64};
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn coeffs(c2: f64, c1: f64, c0: f64) -> QuadCoeffs<f64> {
    QuadCoeffs { c2: c(c2), c1: c(c1), c0: c(c0) }
}

fn ordered_real() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(0.2f64..3.0).prop_flat_map(|gaps| {
        (-5.0f64..5.0).prop_map(move |start| {
            let mut r = [0.0; 6];
            let mut x = start;
            for (k, g) in gaps.iter().enumerate() {
                x += g;
                r[k] = x;
            }
            r
        })
    })
}

#[test]
fn bracket_hand_expansion() {
    let f = Quadratic::real(0.0, 1.0); // x² − x
    let g = Quadratic::real(2.0, 3.0); // x² − 5x + 6
    let b = bracket(&f, &g);
    assert_relative_eq!(b.c2.re, -4.0);
    assert_relative_eq!(b.c1.re, 12.0);
    assert_relative_eq!(b.c0.re, -6.0);
    let z = bracket(&f, &f);
    assert_eq!(z.c2.norm() + z.c1.norm() + z.c0.norm(), 0.0);
}

#[test]
fn quadratic_round_trip() {
    let q = Quadratic::new(C64::new(1.5, -0.3), C64::new(-2.0, 4.0));
    let (r1, r2) = q.coeffs().roots().unwrap();
    let (s1, s2) = if (r1 - q.r1).norm() < (r1 - q.r2).norm() { (r1, r2) } else { (r2, r1) };
    assert!((s1 - q.r1).norm() < 1e-12 * q.r1.norm());
    assert!((s2 - q.r2).norm() < 1e-12 * q.r2.norm());
}

#[test]
fn delta_hand_value() {
    // P = x² − 1, Q = x² − x, R = x² + 1
    let m = SexticModel {
        p: Quadratic::real(-1.0, 1.0),
        q: Quadratic::real(0.0, 1.0),
        r: Quadratic::new(C64::new(0.0, 1.0), C64::new(0.0, -1.0)),
        conjugate_paired: false,
    };
    assert_relative_eq!(delta_det(&m).re, 2.0, epsilon = 1e-14);
    let rep = SexticModel { q: m.p, ..m };
    assert_eq!(delta_det(&rep).norm(), 0.0);
}

#[test]
fn delta_row_scaling() {
    use monopole_agm::hyperpoly::delta_det_coeffs;
    let rows = [coeffs(1.0, -2.0, 0.5), coeffs(1.0, 3.0, 1.0), coeffs(1.0, 0.5, -4.0)];
    let d = delta_det_coeffs(rows);
    let scaled = [coeffs(3.0, -6.0, 1.5), rows[1], rows[2]];
    assert_relative_eq!(delta_det_coeffs(scaled).re, 3.0 * d.re, max_relative = 1e-14);
}

#[test]
fn interlacing_on_reference_sextic() {
    let m = SexticModel::real([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let r = resolvent_roots(&m).unwrap();
    let chain = [0.0, r.v, r.w, 1.0, 2.0, r.w2, r.u, 3.0, 4.0, r.u2, r.v2, 5.0];
    assert!(chain.windows(2).all(|w| w[0] <= w[1]), "{chain:?}");
}

#[test]
fn closed_forms_match_root_extraction() {
    let m = SexticModel::real([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let r = resolvent_roots(&m).unwrap();
    let [u, v, w] = resolvent_triple(&m).unwrap();
    for (poly, (x, y)) in [(u, (r.u, r.u2)), (v, (r.v, r.v2)), (w, (r.w, r.w2))] {
        let (p1, p2) = poly.roots().unwrap();
        let mut found = [p1.re, p2.re];
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = [x, y];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(found[0], want[0], max_relative = 1e-12);
        assert_relative_eq!(found[1], want[1], max_relative = 1e-12);
    }
}

#[test]
fn conjugate_pairs_give_real_resolvent_roots() {
    let m = SexticModel::conjugate(C64::new(-1.3, -0.4), C64::new(0.2, -1.7), C64::new(1.1, -0.9)).unwrap();
    let r = resolvent_roots(&m).unwrap();
    assert!(r.as_array().iter().all(|x| x.is_finite()));
    // A₀² = |b − c|²·|b − c̄|² is a product of conjugate factors.
    let (b, cc) = (m.q.r1, m.r.r1);
    let a2 = (b - cc) * (b - cc.conj()) * (b.conj() - cc) * (b.conj() - cc.conj());
    assert!(a2.im.abs() < 1e-14 * a2.norm() && a2.re >= 0.0);
}

#[test]
fn symmetric_root_set_gives_symmetric_resolvents() {
    let m = SexticModel::real([-5.0, -4.0, -1.0, 1.0, 4.0, 5.0]).unwrap();
    let mut all = resolvent_roots(&m).unwrap().as_array().to_vec();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for k in 0..6 {
        assert_relative_eq!(all[k], -all[5 - k], epsilon = 1e-12);
    }
}

#[test]
fn swapping_q_and_r_swaps_resolvent_roles() {
    let m = SexticModel::real([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let sw = SexticModel { q: m.r, r: m.q, ..m };
    let (r, s) = (resolvent_roots(&m).unwrap(), resolvent_roots(&sw).unwrap());
    // v and w exchange; u = [Q,R] keeps its root set.
    assert_relative_eq!(r.v.min(r.v2), s.w.min(s.w2), max_relative = 1e-12);
    assert_relative_eq!(r.w.max(r.w2), s.v.max(s.v2), max_relative = 1e-12);
    assert_relative_eq!(r.u.min(r.u2), s.u.min(s.u2), max_relative = 1e-12);
}

#[test]
fn degenerate_sextic_is_rejected() {
    let m = SexticModel {
        p: Quadratic::real(0.0, 1.0),
        q: Quadratic::real(1.0 + 1e-12, 2.0),
        r: Quadratic::real(3.0, 4.0),
        conjugate_paired: false,
    };
    assert!(matches!(resolvent_roots(&m), Err(HyperpolyError::Degenerate { .. })));
    assert!(SexticModel::real([0.0, 2.0, 1.0, 3.0, 4.0, 5.0]).is_err());
}

#[test]
fn single_precision_bracket() {
    let f = monopole_agm::hyperpoly::Quadratic::<f32>::real(0.0, 1.0);
    let g = monopole_agm::hyperpoly::Quadratic::<f32>::real(2.0, 3.0);
    let b = bracket(&f, &g);
    assert_eq!((b.c2.re, b.c1.re, b.c0.re), (-4.0, 12.0, -6.0));
}

proptest! {
    #[test]
    fn bracket_antisymmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, cc in -3.0f64..3.0, d in -3.0f64..3.0) {
        let f = Quadratic::real(a, b);
        let g = Quadratic::real(cc, d);
        let (x, y) = (bracket(&f, &g), bracket(&g, &f));
        prop_assert!((x.c2 + y.c2).norm() < 1e-12 && (x.c1 + y.c1).norm() < 1e-12 && (x.c0 + y.c0).norm() < 1e-12);
    }

    #[test]
    fn bracket_bilinear(l in -2.0f64..2.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let f = coeffs(1.0, a, b);
        let g = coeffs(0.5, -b, a);
        let h = coeffs(-1.0, 2.0, 0.3);
        let fg = QuadCoeffs { c2: f.c2 * l + g.c2, c1: f.c1 * l + g.c1, c0: f.c0 * l + g.c0 };
        let lhs = bracket_coeffs(&fg, &h);
        let (x, y) = (bracket_coeffs(&f, &h), bracket_coeffs(&g, &h));
        prop_assert!((lhs.c2 - (x.c2 * l + y.c2)).norm() < 1e-12);
        prop_assert!((lhs.c1 - (x.c1 * l + y.c1)).norm() < 1e-12);
        prop_assert!((lhs.c0 - (x.c0 * l + y.c0)).norm() < 1e-12);
    }

    #[test]
    fn interlacing_chain_holds(r in ordered_real()) {
        let m = SexticModel::real(r).unwrap();
        let s = resolvent_roots(&m).unwrap();
        let chain = [r[0], s.v, s.w, r[1], r[2], s.w2, s.u, r[3], r[4], s.u2, s.v2, r[5]];
        prop_assert!(chain.windows(2).all(|w| w[0] <= w[1]), "{:?}", chain);
    }

    #[test]
    fn conjugate_resolvents_real(ar in -3.0f64..-1.0, br in -0.5f64..0.5, cr in 1.0f64..3.0,
                                 ai in -2.0f64..-0.1, bi in -2.0f64..-0.1, ci in -2.0f64..-0.1) {
        let m = SexticModel::conjugate(C64::new(ar, ai), C64::new(br, bi), C64::new(cr, ci)).unwrap();
        prop_assert!(resolvent_roots(&m).is_ok());
    }
}
