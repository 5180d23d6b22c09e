use approx::assert_relative_eq;
use monopole_agm::agm_elliptic::{agm, elliptic_integral_agm, AgmError};
use monopole_agm::quadrature::gauss_kronrod;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

fn direct_elliptic(a: f64, b: f64) -> f64 {
    gauss_kronrod(
        |phi: f64| 1.0 / (a * a * phi.cos().powi(2) + b * b * phi.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-14,
    )
    .unwrap()
}

#[test]
fn fixed_points() {
    let r = agm(1.0, 1.0, 1e-15).unwrap();
    assert_eq!(r.mean, 1.0);
    assert_eq!(r.iterations, 0);
    assert_eq!(agm(4.0, 4.0, 1e-15).unwrap().mean, 4.0);
}

#[test]
fn sqrt2_reference() {
    let m = agm(SQRT_2, 1.0, 1e-15).unwrap().mean;
    assert_relative_eq!(m, 1.198_140_234_735_592_2, max_relative = 1e-14);
    let k = elliptic_integral_agm(SQRT_2, 1.0).unwrap();
    assert_relative_eq!(k, 1.311_028_777_146_059_9, max_relative = 1e-13);
    assert_relative_eq!(k, direct_elliptic(SQRT_2, 1.0), max_relative = 1e-12);
}

#[test]
fn constant_integrands() {
    assert_relative_eq!(elliptic_integral_agm(1.0, 1.0).unwrap(), FRAC_PI_2);
    assert_relative_eq!(elliptic_integral_agm(2.0, 2.0).unwrap(), FRAC_PI_4);
}

#[test]
fn domain_errors() {
    assert!(matches!(agm(-1.0, 2.0, 1e-12), Err(AgmError::Domain { .. })));
    assert!(matches!(agm(1.0, 0.0, 1e-12), Err(AgmError::Domain { .. })));
    assert!(matches!(agm(1.0, 2.0, 0.0), Err(AgmError::Domain { .. })));
    assert!(elliptic_integral_agm(0.0, 1.0).is_err());
}

#[test]
fn single_precision_instantiation() {
    let m = agm(2.0f32, 1.0f32, 1e-6).unwrap().mean;
    assert!((m - 1.456_791).abs() < 1e-5);
    let k = elliptic_integral_agm(1.0f32, 1.0f32).unwrap();
    assert!((k - PI as f32 / 2.0).abs() < 1e-6);
}

#[test]
fn geometric_decay_and_nesting() {
    let (mut a, mut b) = (9.0f64, 0.2f64);
    let gap0 = a - b;
    for n in 1..8 {
        let (a1, b1) = ((a + b) / 2.0, (a * b).sqrt());
        assert!(b <= b1 && b1 <= a1 && a1 <= a);
        assert!(a1 - b1 <= gap0 / 2f64.powi(n) + 1e-15);
        a = a1;
        b = b1;
    }
}

proptest! {
    #[test]
    fn agrees_with_quadrature(a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let k = elliptic_integral_agm(a, b).unwrap();
        prop_assert!((k - direct_elliptic(a, b)).abs() < 1e-10);
    }

    #[test]
    fn mean_is_bracketed(a in 0.1f64..10.0, b in 0.1f64..10.0) {
        let m = agm(a, b, 1e-15).unwrap();
        prop_assert!(m.mean >= a.min(b) * (1.0 - 1e-15) && m.mean <= a.max(b) * (1.0 + 1e-15));
        prop_assert!(m.iterations <= 10);
    }

    #[test]
    fn scale_equivariance(a in 0.1f64..10.0, b in 0.1f64..10.0, lam in 0.01f64..100.0) {
        let m1 = agm(lam * a, lam * b, 1e-15).unwrap().mean;
        let m2 = lam * agm(a, b, 1e-15).unwrap().mean;
        prop_assert!((m1 - m2).abs() <= 1e-13 * m2);
    }
}
