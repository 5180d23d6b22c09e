use monopole_agm::es_solver::*;
use monopole_agm::monopole_curve::{CurveError, EvalOptions, IntSet, PeriodMethod};
use statrs::function::gamma::gamma;

const SQRT50: f64 = 7.0710678118654755;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn tetrahedral_seed_is_a_root() {
    let e = es_integrals(0.0, SQRT50, IntSet::PLUS, &EvalOptions::default()).unwrap();
    assert!(e.residual.norm() < 1e-8 * e.scale, "{}", e.residual);
    let g = solve_g(0.0, IntSet::PLUS, 7.0, &opts()).unwrap();
    assert!((g - SQRT50).abs() < 1e-6, "{g}");
}

#[test]
fn mirror_branch_seed() {
    let g = solve_g(0.0, IntSet::MINUS, -7.0, &opts()).unwrap();
    assert!((g + SQRT50).abs() < 1e-6, "{g}");
}

#[test]
fn beta_matches_gamma_function_value() {
    let beta = beta_from(0.0, SQRT50, IntSet::PLUS, &EvalOptions::default()).unwrap();
    let expected = gamma(1.0 / 6.0) * gamma(1.0 / 3.0) / (6.0 * 2f64.powf(1.0 / 6.0) * std::f64::consts::PI.sqrt());
    assert!(beta < 0.0);
    assert!((beta.abs().cbrt() - expected).abs() < 1e-6 * expected, "{} vs {expected}", beta.abs().cbrt());
}

#[test]
fn beta_sign_follows_cycle_orientation() {
    let e = EvalOptions::default();
    let b = beta_from(0.0, SQRT50, IntSet::PLUS, &e).unwrap();
    let nb = beta_from(0.0, SQRT50, IntSet::PLUS.scaled(-1), &e).unwrap();
    assert!((b + nb).abs() < 1e-12 * b.abs());
}

#[test]
fn residual_is_odd_in_the_integer_set() {
    let e = EvalOptions::default();
    let r = es_residual(1.0, 4.0, IntSet::PLUS, &e).unwrap();
    let s = es_residual(1.0, 4.0, IntSet::PLUS.scaled(-1), &e).unwrap();
    assert!((r + s).norm() < 1e-14 * r.norm().max(1.0));
}

#[test]
fn mirror_symmetry_on_a_grid() {
    let mut g_plus = SQRT50;
    let mut g_minus = -SQRT50;
    for k in 1..=10 {
        let a = 0.25 * k as f64;
        g_plus = solve_g(a, IntSet::PLUS, g_plus, &opts()).unwrap();
        g_minus = solve_g(a, IntSet::MINUS, g_minus, &opts()).unwrap();
        assert!((g_plus + g_minus).abs() < 1e-6, "a = {a}: {g_plus} vs {g_minus}");
    }
}

#[test]
fn missing_root_reports_no_bracket() {
    // The first integer set has no solution with g < 0 near the seed.
    let o = SolverOptions { max_bracket_doublings: 3, ..opts() };
    assert!(matches!(solve_g(0.0, IntSet::PLUS, -7.0, &o), Err(SolveError::NoBracket { .. })));
}

#[test]
fn unscale_rules() {
    let (alpha, gamma) = unscale(2.0, 3.0, -8.0).unwrap();
    assert!((alpha - 8.0).abs() < 1e-14 && (gamma + 24.0).abs() < 1e-14);
    assert_eq!(unscale(1.0, 1.0, 0.0), Err(SolveError::ZeroBeta));
    // At a = 3 the unscaled parameters satisfy α³ = 27β².
    let beta = -5.0f64;
    let (alpha, _) = unscale(3.0, 0.0, beta).unwrap();
    assert!((alpha.powi(3) - 27.0 * beta * beta).abs() < 1e-10 * alpha.powi(3));
}

#[test]
fn sweep_grid_shape() {
    let up = sweep_grid(0.0, 2.99, 0.1, 0.01, 2.8);
    assert_eq!(up.len(), 28 + 19);
    assert_eq!(up[27], 2.8);
    assert_eq!(*up.last().unwrap(), 2.99);
    let down = sweep_grid(0.0, -1.0, 0.1, 0.01, 2.8);
    assert_eq!(down.len(), 10);
    assert_eq!(*down.last().unwrap(), -1.0);
}

#[test]
fn sweep_to_the_singular_point() {
    let cfg = SweepConfig::new(IntSet::PLUS, 0.0, 2.99).unwrap();
    let r = continuation_sweep(&cfg).unwrap();
    assert_eq!(r.upper, StopReason::Completed);
    let pts = r.points_sorted();
    assert_eq!(pts.len(), 48);
    assert!(pts.windows(2).all(|w| w[1].g < w[0].g), "g strictly decreasing");
    for p in &pts {
        assert!(p.oracle_residual_rel.unwrap() < 1e-8, "a = {}", p.a);
    }
    // |β| grows towards a = 3.
    assert!(pts.last().unwrap().beta.abs() > 10.0 * pts[0].beta.abs());

    let cfg3 = SweepConfig { a_max: 3.0, a_min: 2.9, ..cfg };
    let r3 = continuation_sweep(&cfg3).unwrap();
    assert!(matches!(r3.upper, StopReason::Degenerate { .. }), "{:?}", r3.upper);
    assert!(r3.points.iter().all(|p| p.a < 3.0));
}

#[test]
fn negative_tail_keeps_increasing_g() {
    let cfg = SweepConfig::new(IntSet::PLUS, -3.0, 0.0).unwrap();
    let r = continuation_sweep(&cfg).unwrap();
    assert_eq!(r.lower, StopReason::Completed);
    let pts = r.points_sorted();
    assert_eq!(pts.len(), 31);
    assert!(pts.windows(2).all(|w| w[1].g < w[0].g));
    assert!(pts.iter().filter(|p| p.a < 0.0).all(|p| p.g > SQRT50));
}

#[test]
fn continuation_reaches_off_grid_points() {
    let cfg = SweepConfig::new(IntSet::PLUS, -15.0, 2.99).unwrap();
    let p = solve_by_continuation(-1.234, &cfg).unwrap();
    assert_eq!(p.a, -1.234);
    let direct = solve_g(-1.234, IntSet::PLUS, p.g + 0.01, &opts()).unwrap();
    assert!((direct - p.g).abs() < 1e-8);
}

#[test]
fn agm_and_oracle_solves_agree() {
    let agm = SolverOptions { eval: EvalOptions::with_method(PeriodMethod::Agm), ..opts() };
    let orc = SolverOptions { eval: EvalOptions::with_method(PeriodMethod::Oracle), ..opts() };
    for (a, g0) in [(-4.0, 19.0), (1.5, 3.2)] {
        let x = solve_g(a, IntSet::PLUS, g0, &agm).unwrap();
        let y = solve_g(a, IntSet::PLUS, g0, &orc).unwrap();
        assert!((x - y).abs() < 1e-8, "a = {a}: {x} vs {y}");
    }
}

#[test]
fn tail_sweep_grows_geometrically() {
    let cfg = SweepConfig::new(IntSet::PLUS, -15.0, 0.0).unwrap();
    let a = solve_point(-14.9, IntSet::PLUS, 62.4, &cfg.solver, false).unwrap();
    let b = solve_point(-15.0, IntSet::PLUS, a.g, &cfg.solver, false).unwrap();
    let (tail, stop) = tail_sweep((a.a, a.g), &b, -60.0, 1.5, &cfg.solver, true);
    assert_eq!(stop, StopReason::Completed);
    assert_eq!(tail.len(), 3);
    assert!(tail.windows(2).all(|w| w[1].g > w[0].g && w[1].alpha < w[0].alpha));
}

#[test]
fn degenerate_seed_is_an_error() {
    let cfg = SweepConfig { seed: (3.0, 0.0), ..SweepConfig::new(IntSet::PLUS, 2.0, 3.0).unwrap() };
    assert!(matches!(continuation_sweep(&cfg), Err(SolveError::Curve(CurveError::Degenerate { .. }))));
}
