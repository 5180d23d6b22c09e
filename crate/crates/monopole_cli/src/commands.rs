use crate::config::RunConfig;
use crate::output::{self, Conventions, Manifest, SeedPoint, SweepSummary};
use crate::CliError;
use monopole_agm::agm_elliptic::agm;
use monopole_agm::es_solver::{continuation_sweep, solve_by_continuation, StopReason, SweepResult};
use monopole_agm::monopole_curve::{
    abel_characteristics, involution_matrix_checks, pair_values, period_data_from_pairs, quotient_branch_points,
    CurveParams, CHARACTERISTIC_TOL, EXPECTED_ABEL, EXPECTED_A_INF_B1, EXPECTED_K_B1, EXPECTED_K_INF,
};
use monopole_agm::theta::{h3_scan_curve, H3Scan, INTERIOR, VANISHING_THRESHOLD};
use monopole_agm::C64;
use serde::Serialize;
use std::io::Write;

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn cmd_agm(a: f64, b: f64, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let r = agm(a, b, tol).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "M({a}, {b}) = {}", r.mean).map_err(io)?;
    writeln!(out, "iterations = {}", r.iterations).map_err(io)?;
    writeln!(out, "K = pi/(2M) = {}", std::f64::consts::FRAC_PI_2 / r.mean).map_err(io)?;
    Ok(())
}

fn ensure_dir(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::Io(format!("{}: {e}", cfg.out_dir.display())))
}

/// Runs the sweep, writes `solutions.csv` and `manifest.json`, and fails
/// when the continuation stalls or jumps branches (after writing the points
/// found so far).
pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<SweepResult, CliError> {
    let sweep = cfg.sweep_config()?;
    let run = continuation_sweep(&sweep).map_err(|e| CliError::Failed(format!("seed point: {e}")))?;
    ensure_dir(cfg)?;
    let csv_path = cfg.out_dir.join("solutions.csv");
    output::write_solutions_csv(&csv_path, &run.points)?;
    let seed = run.points.iter().find(|p| p.a == sweep.seed.0);
    let manifest = Manifest {
        config: cfg,
        seed_point: SeedPoint { a: sweep.seed.0, g: seed.map_or(sweep.seed.1, |p| p.g), beta: seed.map(|p| p.beta) },
        intset: sweep.intset.to_string(),
        conventions: Conventions::current(),
        tool_version: output::TOOL_VERSION,
        result: SweepSummary {
            points: run.points.len(),
            upper: output::stop_text(&run.upper),
            lower: output::stop_text(&run.lower),
        },
    };
    output::write_json(&cfg.out_dir.join("manifest.json"), &manifest)?;

    writeln!(out, "intset {}: {} points written to {}", sweep.intset, run.points.len(), csv_path.display())
        .map_err(io)?;
    if let Some(p) = seed {
        writeln!(out, "seed: a = {}, g = {}, beta = {}", p.a, p.g, p.beta).map_err(io)?;
    }
    writeln!(out, "towards a_max = {}: {}", cfg.a_max, output::stop_text(&run.upper)).map_err(io)?;
    writeln!(out, "towards a_min = {}: {}", cfg.a_min, output::stop_text(&run.lower)).map_err(io)?;
    for stop in [&run.upper, &run.lower] {
        if matches!(stop, StopReason::Stalled { .. } | StopReason::Jump { .. }) {
            let last = run.points_sorted().into_iter().map(|p| (p.a, p.g)).collect::<Vec<_>>();
            let edge = if std::ptr::eq(stop, &run.upper) { last.last() } else { last.first() };
            return Err(CliError::Failed(format!(
                "continuation {}; last good point {:?}",
                output::stop_text(stop),
                edge.copied().unwrap_or((f64::NAN, f64::NAN))
            )));
        }
    }
    Ok(run)
}

fn fmt_c(z: C64) -> String {
    format!("{:.10}{:+.10}i", z.re, z.im)
}

pub fn cmd_periods(
    a: f64,
    g: f64,
    check_involution: bool,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let params = CurveParams::new(a, g);
    let bps = quotient_branch_points(params).map_err(|e| CliError::Failed(e.to_string()))?;
    let eval = cfg.eval_options()?;
    let pairs = pair_values(&bps, &eval).map_err(|e| CliError::Failed(e.to_string()))?;
    let pd = period_data_from_pairs(params, pairs).map_err(|e| CliError::Verification(e.to_string()))?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io);

    w(out, format!("curve Y^2 = (X^3 + {a} X + {g})^2 + 4"))?;
    w(out, "branch points:".into())?;
    for (j, z) in bps.points().iter().enumerate() {
        w(out, format!("  B{} = {}", j + 1, fmt_c(*z)))?;
    }
    w(out, format!("pair integrals by: {}", pd.pairs.method.name()))?;
    w(out, "tau:".into())?;
    for i in 0..2 {
        w(out, format!("  [{}  {}]", fmt_c(pd.tau[(i, 0)]), fmt_c(pd.tau[(i, 1)])))?;
    }
    let sym = pd.symmetry_defect();
    let ev = pd.im_tau_min_eigenvalue();
    w(out, format!("tau symmetric: {} (relative defect {sym:.2e})", if sym < 1e-10 { "yes" } else { "no" }))?;
    w(out, format!("Im tau positive definite: {} (smallest eigenvalue {ev:.6})", if ev > 0.0 { "yes" } else { "no" }))?;

    let abel = abel_characteristics(&pd, &bps, eval.tol_quad).map_err(|e| CliError::Failed(e.to_string()))?;
    w(out, "Abel characteristics [alpha1 alpha2; beta1 beta2] (computed, reduced | expected):".into())?;
    let row = |name: String,
               c: &monopole_agm::monopole_curve::Characteristic,
               e: &monopole_agm::monopole_curve::Characteristic| {
        format!("  {name:<10} {} | {}  (distance {:.1e})", c.reduced(), e, c.distance_mod1(e))
    };
    for (j, (c, e)) in abel.chars.iter().zip(EXPECTED_ABEL.iter()).enumerate() {
        w(out, row(format!("A(B{})", j + 1), c, e))?;
    }
    w(out, row("K_B1".into(), &abel.k_b1, &EXPECTED_K_B1))?;
    w(out, row("A_inf(B1)".into(), &abel.a_inf_b1, &EXPECTED_A_INF_B1))?;
    w(out, row("K_inf".into(), &abel.k_inf, &EXPECTED_K_INF))?;

    let mut failures = Vec::new();
    if !(sym < 1e-6) || !(ev > 0.0) {
        failures.push("period matrix".to_string());
    }
    if let Err(e) = abel.verify(CHARACTERISTIC_TOL) {
        failures.push(e.to_string());
    }
    if check_involution {
        let report = involution_matrix_checks();
        for (what, ok) in report.lines() {
            w(out, format!("{} {what}", if ok { "PASS" } else { "FAIL" }))?;
        }
        if !report.all_pass() {
            failures.push("involution identities".into());
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures.join("; ")))
    }
}

#[derive(Serialize)]
struct ScanSummary {
    a: f64,
    g: f64,
    beta: f64,
    grid: usize,
    interior: (f64, f64),
    interior_min: [f64; 3],
    interior_median: [f64; 3],
    endpoint_moduli: [[f64; 3]; 2],
    vanishing_at_0: [bool; 3],
    vanishing_at_2: [bool; 3],
    vanishing_threshold: f64,
    h3: bool,
}

/// Solves at `a` by continuation from the seed, scans the theta factors and
/// writes `theta_k{0,1,2}.dat` plus `theta_manifest.json`.
pub fn cmd_theta_scan(a: f64, cfg: &RunConfig, out: &mut dyn Write) -> Result<H3Scan, CliError> {
    let sweep = cfg.sweep_config()?;
    let sp = solve_by_continuation(a, &sweep).map_err(|e| CliError::Failed(e.to_string()))?;
    let (_, scan) = h3_scan_curve(CurveParams::new(sp.a, sp.g), sweep.intset, &sweep.solver.eval, cfg.grid)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    ensure_dir(cfg)?;
    let manifest = Manifest {
        config: cfg,
        seed_point: SeedPoint { a: sweep.seed.0, g: sweep.seed.1, beta: None },
        intset: sweep.intset.to_string(),
        conventions: Conventions::current(),
        tool_version: output::TOOL_VERSION,
        result: ScanSummary {
            a: sp.a,
            g: sp.g,
            beta: sp.beta,
            grid: cfg.grid,
            interior: INTERIOR,
            interior_min: scan.interior_min,
            interior_median: scan.interior_median,
            endpoint_moduli: scan.endpoint_moduli,
            vanishing_at_0: scan.vanishing(0),
            vanishing_at_2: scan.vanishing(1),
            vanishing_threshold: VANISHING_THRESHOLD,
            h3: scan.satisfies_h3(),
        },
    };
    let header = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    let files = output::write_theta_columns(&cfg.out_dir, &scan, &header)?;
    output::write_json(&cfg.out_dir.join("theta_manifest.json"), &manifest)?;

    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io);
    w(out, format!("solution: a = {}, g = {}, beta = {}", sp.a, sp.g, sp.beta))?;
    for k in 0..3 {
        w(
            out,
            format!(
                "k = {k}: interior min {:.6e} (median {:.6e}); |theta| at lambda = 0: {:.3e}, at lambda = 2: {:.3e}",
                scan.interior_min[k], scan.interior_median[k], scan.endpoint_moduli[0][k], scan.endpoint_moduli[1][k]
            ),
        )?;
    }
    for (end, lam) in [(0, 0), (1, 2)] {
        let v = scan.vanishing(end);
        let ks: Vec<String> = (0..3).filter(|&k| v[k]).map(|k| k.to_string()).collect();
        w(out, format!("lambda = {lam}: {} of 3 vanishing (k = {})", scan.vanishing_count(end), ks.join(", ")))?;
    }
    w(out, format!("interior minima > 0: {}", if scan.interior_min.iter().all(|&m| m > 0.0) { "yes" } else { "no" }))?;
    w(out, format!("H3: {}", if scan.satisfies_h3() { "PASS" } else { "FAIL" }))?;
    for f in &files {
        w(out, format!("wrote {}", f.display()))?;
    }
    if scan.satisfies_h3() {
        Ok(scan)
    } else {
        Err(CliError::Verification("H3 scan".into()))
    }
}
