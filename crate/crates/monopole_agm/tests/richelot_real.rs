mod common;

use approx::assert_relative_eq;
use common::real_oracle;
use monopole_agm::hyperpoly::resolvent_roots;
use monopole_agm::quadrature::{segment, CutSheet, Endpoint, Lip};
use monopole_agm::richelot::{pair_integrals_real, richelot_limits, richelot_step, PairLabel, RichelotError};
use monopole_agm::{Linear, SexticModel, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REF: [f64; 6] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];

fn random_sextic(rng: &mut ChaCha8Rng) -> [f64; 6] {
    let mut x = rng.gen_range(-5.0..5.0);
    let mut r = [0.0; 6];
    for v in r.iter_mut() {
        x += rng.gen_range(0.2..3.0);
        *v = x;
    }
    r
}

#[test]
fn step_reorders_resolvent_roots() {
    let m = SexticModel::real(REF).unwrap();
    let r = resolvent_roots(&m).unwrap();
    let (next, t) = richelot_step(REF).unwrap();
    assert_eq!(next, [r.v, r.w, r.w2, r.u, r.u2, r.v2]);
    assert!(t > 0.0);
}

#[test]
fn limits_interlace_for_reference() {
    let o = richelot_limits(REF).unwrap();
    let [ma, mb, mc] = o.limits;
    assert!(0.0 < ma && ma < 1.0 && 2.0 < mb && mb < 3.0 && 4.0 < mc && mc < 5.0, "{:?}", o.limits);
    assert_relative_eq!(o.t_product, o.t_factors.iter().product::<f64>());
    assert_eq!(o.states.len(), o.t_factors.len() + 1);
}

#[test]
fn symmetric_sextic_has_zero_middle_limit() {
    let o = richelot_limits([-5.0f64, -4.0, -1.0, 1.0, 4.0, 5.0]).unwrap();
    assert!(o.limits[1].abs() < 1e-14);
    assert_relative_eq!(o.limits[0], -o.limits[2], max_relative = 1e-14);
}

#[test]
fn quadratic_convergence_on_random_sextics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let o = richelot_limits(random_sextic(&mut rng)).unwrap();
        assert!(o.t_factors.len() <= 8, "{} steps", o.t_factors.len());
    }
}

#[test]
fn numerator_vanishing_at_limit_kills_the_pair() {
    let o = richelot_limits(REF).unwrap();
    let s = Linear::real(-o.limits[0], 1.0);
    let t = pair_integrals_real(&SexticModel::real(REF).unwrap(), &s).unwrap();
    assert!(t.get(PairLabel::AA).norm() < 1e-14);
}

#[test]
fn reference_table_matches_oracle() {
    let m = SexticModel::real(REF).unwrap();
    for s in [Linear::one(), Linear::x(), Linear::real(2.0, -3.0)] {
        let t = pair_integrals_real(&m, &s).unwrap();
        for l in PairLabel::ALL {
            let o = real_oracle(REF, l, &s);
            assert!(
                (t.get(l) - o).norm() < 1e-11 * o.norm().max(t.scale()),
                "{:?} {} {} vs {}",
                s,
                l.name(),
                t.get(l),
                o
            );
        }
        let sum = t.get(PairLabel::AA) + t.get(PairLabel::BB) + t.get(PairLabel::CC);
        assert!(sum.norm() < 1e-12 * t.scale());
    }
}

#[test]
fn gaps_are_imaginary_and_pairs_real() {
    let t = pair_integrals_real(&SexticModel::real(REF).unwrap(), &Linear::one()).unwrap();
    for l in [PairLabel::AA, PairLabel::BB, PairLabel::CC] {
        assert!(t.get(l).im.abs() < 1e-15 * t.scale());
    }
    let gap = t.get(PairLabel::AB) - t.get(PairLabel::AA);
    assert!(gap.re.abs() < 1e-14 * t.scale() && gap.im.abs() > 0.1);
}

#[test]
fn one_step_identity_against_oracle() {
    // ∫_{aₙ}^{aₙ′} S/y = tₙ ∫_{aₙ₊₁}^{aₙ₊₁′} S/y on the successor, at every step.
    let s = Linear::one();
    let o = richelot_limits(REF).unwrap();
    for n in 0..3 {
        let lhs = real_oracle(o.states[n], PairLabel::AA, &s);
        let rhs = real_oracle(o.states[n + 1], PairLabel::AA, &s) * o.t_factors[n];
        assert!((lhs - rhs).norm() < 1e-11 * lhs.norm(), "step {n}: {lhs} vs {rhs}");
    }
}

#[test]
fn single_precision_orbit() {
    let o = richelot_limits([0.0f32, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let d = richelot_limits(REF).unwrap();
    for k in 0..3 {
        assert!((o.limits[k] as f64 - d.limits[k]).abs() < 1e-5);
    }
}

#[test]
fn conjugate_model_rejected_by_real_table() {
    let m = SexticModel::conjugate(C64::new(-1.0, -1.0), C64::new(0.0, -1.0), C64::new(1.0, -1.0)).unwrap();
    assert!(matches!(pair_integrals_real(&m, &Linear::one()), Err(RichelotError::WrongModel(_))));
}

#[test]
fn pair_entry_via_cut_sheet_lip_directly() {
    // Independent of the helper: a single upper-lip leg over [b, b′].
    let r = REF.map(C64::from);
    let sheet = CutSheet::new(r, [(0, 1), (2, 3), (4, 5)]).unwrap();
    let w = segment(&sheet, Endpoint::Root(2), Endpoint::Root(3), Some(Lip::Left), &Linear::one(), 1e-13).unwrap();
    let t = pair_integrals_real(&SexticModel::real(REF).unwrap(), &Linear::one()).unwrap();
    assert!((t.get(PairLabel::BB) - common::I * w).norm() < 1e-11 * w.norm());
}
