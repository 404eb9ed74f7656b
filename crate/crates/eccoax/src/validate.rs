//! Self-checks of a configuration: map Jacobian, concentric oracle and mesh
//! convergence, and structural properties of the discrete operators. The
//! report contains no timings, so repeated runs print identical bytes.

use std::fmt::Write;

use eccoax_core::reference::concentric_cutoffs;
use eccoax_core::{solve_eigs, ConcentricMap, EccentricGeometry, ModeFamily, UniaxialMedium};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::pipeline::{build_operator, radial};

pub const JACOBIAN_POINTS: usize = 1000;
pub const JACOBIAN_TOL: f64 = 1e-5;
/// Central-difference step as a fraction of `r1`.
pub const JACOBIAN_STEP: f64 = 1e-7;
pub const CONVERGENCE_LADDER: [(usize, usize); 3] = [(10, 41), (20, 81), (40, 161)];
pub const ORDER_RANGE: (f64, f64) = (1.7, 2.3);
pub const ORACLE_TOL: f64 = 0.005;
pub const RESIDUAL_BOUND: f64 = 1e-8;
const ROW_SUM_TOL: f64 = 1e-12;
const CONSTANT_MODE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

/// Largest relative gap between the closed-form Jacobian weight and the
/// central-difference determinant of the point map, over seeded random points.
pub fn jacobian_deviation(geometry: &EccentricGeometry, points: usize, seed: u64) -> Result<f64, CliError> {
    let map = ConcentricMap::build(geometry)?;
    let step = JACOBIAN_STEP * geometry.r1_outer();
    let (lo, hi) = (map.r0_mapped() + 4.0 * step, map.r1_mapped() - 4.0 * step);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut worst = 0.0f64;
    for _ in 0..points {
        // Uniform in area over the annulus.
        let rho = (lo * lo + unit() * (hi * hi - lo * lo)).sqrt();
        let phi = unit() * std::f64::consts::TAU;
        let exact = map.jacobian_inv(rho, phi)?;
        let fd = map.finite_difference_jacobian(rho, phi, step)?;
        worst = worst.max((fd - exact).abs() / exact);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    /// `(M, N, h_ρ, λ, relative eigenvalue error)` per mesh.
    pub meshes: Vec<(usize, usize, f64, f64, f64)>,
    pub oracle_lambda: f64,
    /// Observed order between consecutive meshes, using the actual `h_ρ` ratio.
    pub pairwise_orders: Vec<f64>,
    /// Least-squares slope of `log error` against `log h_ρ` over all meshes.
    pub fitted_order: f64,
    /// Relative `k_ρ` error on the finest mesh.
    pub finest_krho_error: f64,
}

impl ConvergenceStudy {
    /// The estimate from the two finest meshes.
    pub fn observed_order(&self) -> f64 {
        *self.pairwise_orders.last().expect("at least two meshes")
    }
}

/// First TM eigenvalue of the concentric guide with radii `(r0, r1)` on each
/// mesh, against the cross-product root.
pub fn convergence_study(r0: f64, r1: f64, ladder: &[(usize, usize)]) -> Result<ConvergenceStudy, CliError> {
    let k = concentric_cutoffs(r0, r1, ModeFamily::Tm, 0, 1)?[0].k;
    let oracle_lambda = -k * k;
    let geometry = EccentricGeometry::concentric(r1, r0)?;
    let mut meshes = Vec::with_capacity(ladder.len());
    for &(m, n) in ladder {
        let op = build_operator(&geometry, m, n, ModeFamily::Tm)?;
        let lambda = solve_eigs(&op, 1)?.pairs[0].lambda;
        let err = ((lambda - oracle_lambda) / oracle_lambda).abs();
        meshes.push((m, n, op.grid().h_rho(), lambda, err));
    }
    let pairwise_orders = meshes
        .windows(2)
        .map(|w| (w[0].4 / w[1].4).ln() / (w[0].2 / w[1].2).ln())
        .collect();
    let xs: Vec<f64> = meshes.iter().map(|m| m.2.ln()).collect();
    let ys: Vec<f64> = meshes.iter().map(|m| m.4.ln()).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let finest = meshes.last().expect("non-empty ladder").3;
    Ok(ConvergenceStudy {
        meshes,
        oracle_lambda,
        pairwise_orders,
        fitted_order: sxy / sxx,
        finest_krho_error: ((-finest).sqrt() - k).abs() / k,
    })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Structural checks of both families on one geometry and grid.
pub fn structural_checks(
    geometry: &EccentricGeometry,
    radial_nodes: usize,
    azimuthal_nodes: usize,
    modes: usize,
) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for family in ModeFamily::ALL {
        let op = build_operator(geometry, radial_nodes, azimuthal_nodes, family)?;
        let ix = op.indexing();
        let rings = match family {
            ModeFamily::Tm => radial_nodes - 2,
            ModeFamily::Te => radial_nodes,
        };
        let expected = rings * (azimuthal_nodes - 1);
        checks.push(Check {
            name: family_name(family, "unknowns"),
            passed: op.total_unknowns() == expected,
            detail: format!("{} unknowns, expected {expected}", op.total_unknowns()),
        });

        // Rows next to a TM conductor lose the Dirichlet neighbour and are exempt.
        let a = op.a();
        let norm = a.norm_inf();
        let interior = |k: usize| {
            let (ring, _) = ix.position(k).expect("row index in range");
            family == ModeFamily::Te || (ring > 1 && ring + 2 < radial_nodes)
        };
        let rows: Vec<usize> = (0..a.nrows()).filter(|&k| interior(k)).collect();
        let worst_sum = rows.iter().map(|&k| a.row_sum(k).abs()).fold(0.0, f64::max);
        checks.push(Check {
            name: family_name(family, "row_sums"),
            passed: worst_sum <= ROW_SUM_TOL * norm,
            detail: format!(
                "max |row sum| {} over {} interior rows, limit {}",
                sci(worst_sum),
                rows.len(),
                sci(ROW_SUM_TOL * norm)
            ),
        });

        let b = op.b_diagonal();
        let b_min = b.iter().copied().fold(f64::INFINITY, f64::min);
        checks.push(Check {
            name: family_name(family, "b_positive"),
            passed: b_min > 0.0,
            detail: format!("min B = {}", sci(b_min)),
        });

        let spectrum = solve_eigs(&op, modes)?;
        let limit = RESIDUAL_BOUND * spectrum.operator_norm;
        let worst = spectrum.pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
        checks.push(Check {
            name: family_name(family, "residuals"),
            passed: worst <= limit,
            detail: format!("max residual {} over {} modes, limit {}", sci(worst), spectrum.pairs.len(), sci(limit)),
        });

        if family == ModeFamily::Te {
            let (passed, detail) = match &spectrum.null_mode {
                Some(p) => {
                    let dev = p.vector.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
                    (
                        p.lambda.abs() <= spectrum.tol_zero && dev <= CONSTANT_MODE_TOL,
                        format!(
                            "|lambda| = {} (tol_zero {}), max deviation from constant {}",
                            sci(p.lambda.abs()),
                            sci(spectrum.tol_zero),
                            sci(dev)
                        ),
                    )
                }
                None => (false, "no zero eigenvalue found".into()),
            };
            checks.push(Check {
                name: "te_constant_mode".into(),
                passed,
                detail,
            });
        }
    }
    Ok(checks)
}

fn family_name(family: ModeFamily, what: &str) -> String {
    format!("{}_{what}", family.as_str().to_ascii_lowercase())
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

/// Runs every check for `cfg`.
pub fn run_validate(cfg: &RunConfig) -> Result<Report, CliError> {
    let geometry = cfg.geometry()?;
    let mut checks = Vec::new();

    let dev = jacobian_deviation(&geometry, JACOBIAN_POINTS, 0x00ec_c0a8)?;
    checks.push(Check {
        name: "jacobian".into(),
        passed: dev <= JACOBIAN_TOL,
        detail: format!(
            "max relative deviation {} over {JACOBIAN_POINTS} points, limit {}",
            sci(dev),
            sci(JACOBIAN_TOL)
        ),
    });

    let study = convergence_study(geometry.r0_inner(), geometry.r1_outer(), &CONVERGENCE_LADDER)?;
    let meshes: Vec<String> = study
        .meshes
        .iter()
        .map(|(m, n, _, _, e)| format!("({m},{n}) {}", sci(*e)))
        .collect();
    let p = study.observed_order();
    checks.push(Check {
        name: "convergence_order".into(),
        passed: (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&p),
        detail: format!(
            "observed order {p:.3} (pairwise {}, least-squares {:.3}), range [{}, {}]; concentric TM01 eigenvalue errors {}",
            study.pairwise_orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", "),
            study.fitted_order,
            ORDER_RANGE.0,
            ORDER_RANGE.1,
            meshes.join(", ")
        ),
    });
    let (m, n, ..) = study.meshes.last().expect("ladder is non-empty");
    checks.push(Check {
        name: "concentric_oracle".into(),
        passed: study.finest_krho_error <= ORACLE_TOL,
        detail: format!(
            "TM01 k_rho relative error {} at ({m},{n}), limit {}",
            sci(study.finest_krho_error),
            sci(ORACLE_TOL)
        ),
    });

    checks.extend(structural_checks(&geometry, cfg.grid.m, cfg.grid.n, cfg.solve.num_modes)?);

    // Media enter only after the eigensolve: k_ρ must scale as the square root
    // of the anisotropy ratio.
    let lambda = -1e6;
    let base = radial(lambda, &UniaxialMedium::vacuum(), ModeFamily::Tm, None)?.re;
    let worst = [2.0, 5.0, 10.0]
        .iter()
        .map(|&e: &f64| {
            let medium = UniaxialMedium::dielectric(e, 1.0)?;
            let k = radial(lambda, &medium, ModeFamily::Tm, None)?.re;
            Ok((k / base - e.sqrt()).abs() / e.sqrt())
        })
        .collect::<Result<Vec<f64>, CliError>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "anisotropy_scaling".into(),
        passed: worst <= 1e-12,
        detail: format!("max relative deviation from sqrt(eps_rs) scaling {}", sci(worst)),
    });

    Ok(Report { checks })
}
