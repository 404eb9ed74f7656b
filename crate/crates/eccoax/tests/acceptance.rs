//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use eccoax::config::Vary;
use eccoax::pipeline::solve_family;
use eccoax::sweeps::{sweep_anisotropy, sweep_eccentricity, sweep_frequency, SweepResult};
use eccoax::validate::{convergence_study, jacobian_deviation, structural_checks, CONVERGENCE_LADDER};
use eccoax_core::reference::concentric_cutoffs;
use eccoax_core::{EccentricGeometry, ModeFamily, ModeLabel, SolveOptions, UniaxialMedium};
use num_complex::Complex64;

const MM: f64 = 1e-3;

type Outcome = Result<(bool, String), String>;

/// Outer 5 mm, inner 0.25 mm, offset as a fraction of the outer radius.
fn fig2(d_over_r1: f64) -> EccentricGeometry {
    EccentricGeometry::from_millimeters(5.0, 0.25, 5.0 * d_over_r1).unwrap()
}

fn fig5() -> EccentricGeometry {
    EccentricGeometry::from_millimeters(10.0, 2.0, 3.0).unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn concentric_oracle() -> Outcome {
    let t = Instant::now();
    let s = solve_family(&fig2(0.0), 40, 161, ModeFamily::Tm, 1, &SolveOptions::new(1)).map_err(err)?;
    let seconds = t.elapsed().as_secs_f64();
    let mode = &s.modes[0];
    let k = (-mode.pair.lambda).sqrt();
    let oracle = concentric_cutoffs(0.25 * MM, 5.0 * MM, ModeFamily::Tm, 0, 1).map_err(err)?[0].k;
    let rel = (k - oracle).abs() / oracle;
    Ok((
        rel <= 0.005 && seconds < 5.0 && mode.label.name() == "TM01",
        format!(
            "{} k_rho = {k:.6} rad/m vs cross-product root {oracle:.6} rad/m, relative error {rel:.3e} (limit 5e-3), {seconds:.3} s (limit 5 s)",
            mode.label
        ),
    ))
}

fn convergence_order() -> Outcome {
    let study = convergence_study(0.25 * MM, 5.0 * MM, &CONVERGENCE_LADDER).map_err(err)?;
    let p = study.observed_order();
    let errors: Vec<String> = study.meshes.iter().map(|(m, n, _, _, e)| format!("({m},{n}) {e:.3e}")).collect();
    Ok((
        (1.7..=2.3).contains(&p),
        format!(
            "observed order {p:.3} from the two finest meshes (pairwise {:.3}, {:.3}; least-squares {:.3}), range [1.7, 2.3]; eigenvalue errors {}",
            study.pairwise_orders[0],
            study.pairwise_orders[1],
            study.fitted_order,
            errors.join(", ")
        ),
    ))
}

fn jacobian_fidelity() -> Outcome {
    let t = Instant::now();
    let dev = jacobian_deviation(&fig2(0.2), 1000, 2024).map_err(err)?;
    let seconds = t.elapsed().as_secs_f64();
    Ok((
        dev <= 1e-5 && seconds < 1.0,
        format!("max relative deviation {dev:.3e} at 1000 points (limit 1e-5), {seconds:.3} s (limit 1 s)"),
    ))
}

fn factorization() -> Outcome {
    let ratios = [1.0, 2.0, 5.0, 10.0];
    let r = sweep_anisotropy(
        &fig2(0.2),
        &ratios,
        Vary::Transverse,
        40,
        161,
        &[ModeFamily::Tm],
        1,
        &SolveOptions::new(1),
    )
    .map_err(err)?;
    let row = &r.rows[0];
    let worst = ratios
        .iter()
        .zip(&row.values)
        .map(|(e, k)| (k.re / row.values[0].re - e.sqrt()).abs() / e.sqrt())
        .fold(0.0, f64::max);
    let imag = row.values.iter().all(|k| k.im == 0.0);
    Ok((
        r.provenance.eigensolves == 1 && worst <= 1e-12 && imag,
        format!(
            "{}: {} eigensolve(s) for {} ratios, max deviation from sqrt(eps_rs) scaling {worst:.3e} (limit 1e-12)",
            row.label,
            r.provenance.eigensolves,
            ratios.len()
        ),
    ))
}

/// Largest relative eigenvalue gap between rows of equal label (or, failing
/// that, equal position) of two sweeps over the same axis.
fn compare_sweeps(coarse: &SweepResult, fine: &SweepResult) -> (f64, f64, String) {
    let mut worst = (0.0, 0.0, String::new());
    for (i, row) in coarse.rows.iter().enumerate() {
        let other = fine.row(&row.label).unwrap_or(&fine.rows[i]);
        for (p, (a, b)) in row.values.iter().zip(&other.values).enumerate() {
            let (la, lb) = (a.re * a.re, b.re * b.re);
            let rel = (la - lb).abs() / lb;
            if rel > worst.0 {
                worst = (rel, (a.re - b.re).abs() / b.re, format!("{} at d/r1 = {}", row.label, coarse.axis[p]));
            }
        }
    }
    worst
}

fn largest_jump(r: &SweepResult) -> f64 {
    r.rows
        .iter()
        .flat_map(|row| row.values.windows(2).map(|w| (w[1].re - w[0].re).abs() / w[0].re))
        .fold(0.0, f64::max)
}

fn eccentricity_robustness() -> Outcome {
    let offsets = [0.05, 0.10, 0.15, 0.20];
    let families = [ModeFamily::Te, ModeFamily::Tm];
    let opts = SolveOptions::new(3);
    let coarse = sweep_eccentricity(&fig2(0.0), &offsets, 10, 41, &families, 3, &opts).map_err(err)?;
    let fine = sweep_eccentricity(&fig2(0.0), &offsets, 40, 161, &families, 3, &opts).map_err(err)?;
    let complete = coarse.rows.len() == 6 && fine.rows.len() == 6;
    let (worst, worst_k, at) = compare_sweeps(&coarse, &fine);
    let jump = largest_jump(&fine);
    Ok((
        complete && worst <= 0.01,
        format!(
            "{} rows over {} offsets; max coarse/fine eigenvalue difference {:.3}% ({at}; k_rho {:.3}%), limit 1%; largest adjacent k_rho step {:.2}%",
            fine.rows.len(),
            offsets.len(),
            100.0 * worst,
            100.0 * worst_k,
            100.0 * jump
        ),
    ))
}

fn relative_step(a: Complex64, b: Complex64) -> f64 {
    (b - a).norm() / a.norm().max(b.norm())
}

fn lossy_sweep() -> Outcome {
    let f: Vec<f64> = (0..100).map(|i| (1.0 + 9.0 * i as f64 / 99.0) * 1e9).collect();
    let labels: Vec<ModeLabel> = ["TM01", "TM11"].iter().map(|s| s.parse().unwrap()).collect();
    let sweep = |scale: f64| {
        let medium = UniaxialMedium::new(1.0, 1.0, 5.6, 4.6, 0.38 * scale, 0.34 * scale).unwrap();
        sweep_frequency(&fig5(), &medium, &f, 40, 161, &labels, &SolveOptions::new(2)).map_err(err)
    };
    let lossy = sweep(1.0)?;
    let decaying = lossy.rows.iter().all(|r| r.values.iter().all(|k| k.im > 0.0));
    let jump = lossy
        .rows
        .iter()
        .flat_map(|r| r.values.windows(2).map(|w| relative_step(w[0], w[1])))
        .fold(0.0, f64::max);

    // Lossless limit: the conductivities shrink toward zero and k_z must
    // approach the σ = 0 result at every frequency.
    let lossless = sweep(0.0)?;
    let branch_ok = lossless
        .rows
        .iter()
        .all(|r| r.values.iter().all(|k| (k.im == 0.0 && k.re >= 0.0) || (k.re == 0.0 && k.im > 0.0)));
    let mut gaps = Vec::new();
    for scale in [1e-1, 1e-2, 1e-3, 1e-4] {
        let r = sweep(scale)?;
        let gap = r
            .rows
            .iter()
            .zip(&lossless.rows)
            .flat_map(|(a, b)| a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm() / y.norm().max(1.0)))
            .fold(0.0, f64::max);
        gaps.push(gap);
    }
    let converging = gaps.windows(2).all(|w| w[1] < w[0]) && *gaps.last().unwrap() < 1e-2;

    let solves = lossy.provenance.eigensolves;
    Ok((
        solves == 1 && decaying && jump < 0.10 && branch_ok && converging,
        format!(
            "{} eigensolve(s) for {} frequencies; Im k_z > 0 for {}: {decaying}; largest adjacent k_z step {:.2}% (limit 10%); sigma = 0 branch real/imaginary: {branch_ok}; max |k_z - k_z(sigma=0)| for sigma scaled by 1e-1..1e-4: {}",
            solves,
            f.len(),
            lossy.rows.iter().map(|r| r.label.name()).collect::<Vec<_>>().join(", "),
            100.0 * jump,
            gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    ))
}

fn performance() -> Outcome {
    let g = EccentricGeometry::from_millimeters(5.0, 0.25, 1.0).unwrap();
    let t = Instant::now();
    let s = solve_family(&g, 10, 41, ModeFamily::Tm, 6, &SolveOptions::new(6)).map_err(err)?;
    let seconds = t.elapsed().as_secs_f64();
    Ok((
        seconds < 1.0,
        format!(
            "(10, 41) TM, {} unknowns, {} modes: assembly + eigensolve {seconds:.3} s (limit 1 s)",
            s.operator.total_unknowns(),
            s.modes.len()
        ),
    ))
}

fn structural_invariants() -> Outcome {
    let mut failed = Vec::new();
    let mut count = 0;
    for (d, m, n) in [(0.2, 10, 41), (0.0, 10, 41), (0.1, 20, 81)] {
        for c in structural_checks(&fig2(d), m, n, 6).map_err(err)? {
            count += 1;
            if !c.passed {
                failed.push(format!("{} at d/r1 = {d}, ({m},{n}): {}", c.name, c.detail));
            }
        }
    }
    Ok((
        failed.is_empty(),
        if failed.is_empty() {
            format!("{count} checks on three geometries/grids: unknown counts, interior row sums, B > 0, residuals <= 1e-8 ||A||, TE constant mode")
        } else {
            failed.join("; ")
        },
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("concentric oracle equivalence", concentric_oracle),
        ("convergence order", convergence_order),
        ("jacobian fidelity", jacobian_fidelity),
        ("geometry-media factorization", factorization),
        ("eccentricity robustness", eccentricity_robustness),
        ("lossy sweep sanity", lossy_sweep),
        ("performance", performance),
        ("structural invariants", structural_invariants),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !passed {
            failures += 1;
        }
        println!("{} [{}] {name}: {detail}", if passed { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
