//! Parameter sweeps. A fixed geometry is decomposed once per mode family and
//! every medium or frequency point reuses those eigenvalues; only the
//! eccentricity sweep needs a fresh decomposition per point.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use eccoax_core::{EccentricGeometry, LabeledMode, ModeFamily, ModeLabel, SolveOptions, UniaxialMedium};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Vary;
use crate::error::CliError;
use crate::pipeline::{available_modes, axial, radial, solve_family};

/// Extra modes solved at each eccentricity so a tracked mode that drifts past
/// its neighbours is still among the candidates.
const TRACKING_SPARE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Eccentricity,
    Anisotropy,
    Frequency,
}

/// Which wavenumber a row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Krho,
    Kz,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: ModeLabel,
    pub quantity: Quantity,
    /// One value per axis point, in rad/m.
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub r1_m: f64,
    pub r0_m: f64,
    /// Offset of the fixed geometry; `None` for eccentricity sweeps.
    pub d_m: Option<f64>,
    pub radial_nodes: usize,
    pub azimuthal_nodes: usize,
    pub medium: Option<MediumRecord>,
    pub dense_limit: usize,
    pub seed: u64,
    pub eigensolves: usize,
    pub timestamp_unix_s: u64,
    /// Wall-clock seconds per axis point, including any eigensolve it required.
    pub wall_clock_s: Vec<f64>,
    /// Wall-clock seconds of the shared eigensolves of fixed-geometry sweeps.
    pub eigensolve_wall_clock_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumRecord {
    pub mu_rs: f64,
    pub mu_rz: f64,
    pub eps_rs: f64,
    pub eps_rz: f64,
    pub sigma_s: f64,
    pub sigma_z: f64,
}

impl From<&UniaxialMedium> for MediumRecord {
    fn from(m: &UniaxialMedium) -> Self {
        Self {
            mu_rs: m.mu_rs(),
            mu_rz: m.mu_rz(),
            eps_rs: m.eps_rs(),
            eps_rz: m.eps_rz(),
            sigma_s: m.sigma_s(),
            sigma_z: m.sigma_z(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    /// Column name of the axis, with its unit.
    pub axis_name: String,
    pub axis: Vec<f64>,
    pub rows: Vec<SweepRow>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn families(&self) -> Vec<ModeFamily> {
        ModeFamily::ALL
            .into_iter()
            .filter(|f| self.rows.iter().any(|r| r.label.family == *f))
            .collect()
    }

    pub fn row(&self, label: &ModeLabel) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.label == *label)
    }
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn provenance(
    geometry: &EccentricGeometry,
    fixed: bool,
    radial_nodes: usize,
    azimuthal_nodes: usize,
    medium: Option<&UniaxialMedium>,
    options: &SolveOptions,
) -> Provenance {
    Provenance {
        r1_m: geometry.r1_outer(),
        r0_m: geometry.r0_inner(),
        d_m: fixed.then(|| geometry.offset()),
        radial_nodes,
        azimuthal_nodes,
        medium: medium.map(MediumRecord::from),
        dense_limit: options.dense_limit,
        seed: options.seed,
        eigensolves: 0,
        timestamp_unix_s: now_unix(),
        wall_clock_s: Vec::new(),
        eigensolve_wall_clock_s: 0.0,
    }
}

/// `k_ρ` of the first `modes_per_family` modes of each family at each offset
/// (given as fractions of `r1`), in vacuum.
///
/// Modes are followed from the smallest offset upward by label; where a label
/// is ambiguous or missing, the candidate with the nearest eigenvalue is taken.
pub fn sweep_eccentricity(
    base: &EccentricGeometry,
    offsets: &[f64],
    radial_nodes: usize,
    azimuthal_nodes: usize,
    families: &[ModeFamily],
    modes_per_family: usize,
    options: &SolveOptions,
) -> Result<SweepResult, CliError> {
    if offsets.is_empty() {
        return Err(CliError::Config("eccentricity sweep needs at least one offset".into()));
    }
    let r1 = base.r1_outer();
    let geometries = offsets
        .iter()
        .map(|&o| base.with_offset(o * r1).map_err(|e| CliError::Config(format!("offset {o}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;

    let jobs: Vec<(usize, ModeFamily)> = (0..offsets.len())
        .flat_map(|p| families.iter().map(move |&f| (p, f)))
        .collect();
    let solved = jobs
        .par_iter()
        .map(|&(p, family)| {
            let t = Instant::now();
            let count = (modes_per_family + TRACKING_SPARE)
                .min(available_modes(radial_nodes, azimuthal_nodes, family))
                .max(modes_per_family);
            let s = solve_family(&geometries[p], radial_nodes, azimuthal_nodes, family, count, options)?;
            Ok((s.modes, t.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut order: Vec<usize> = (0..offsets.len()).collect();
    order.sort_by(|&a, &b| offsets[a].total_cmp(&offsets[b]));

    let mut rows = Vec::new();
    for (fi, &family) in families.iter().enumerate() {
        let per_point: Vec<&[LabeledMode]> = (0..offsets.len())
            .map(|p| solved[p * families.len() + fi].0.as_slice())
            .collect();
        rows.extend(track_modes(&per_point, &order, modes_per_family, family)?);
    }

    let mut prov = provenance(base, false, radial_nodes, azimuthal_nodes, None, options);
    prov.eigensolves = jobs.len();
    prov.wall_clock_s = (0..offsets.len())
        .map(|p| (0..families.len()).map(|fi| solved[p * families.len() + fi].1).sum())
        .collect();
    Ok(SweepResult {
        kind: SweepKind::Eccentricity,
        axis_name: "d_over_r1".into(),
        axis: offsets.to_vec(),
        rows,
        provenance: prov,
    })
}

/// Follows `count` modes through the points in `order`; rows are indexed by
/// the original point positions.
fn track_modes(
    per_point: &[&[LabeledMode]],
    order: &[usize],
    count: usize,
    family: ModeFamily,
) -> Result<Vec<SweepRow>, CliError> {
    let first = per_point[order[0]];
    if first.len() < count {
        return Err(CliError::Config(format!(
            "only {} {family} modes available, {count} requested",
            first.len()
        )));
    }
    let mut current: Vec<&LabeledMode> = first[..count].iter().collect();
    let mut lambdas = vec![vec![0.0; per_point.len()]; count];
    for (r, mode) in current.iter().enumerate() {
        lambdas[r][order[0]] = mode.pair.lambda;
    }

    for &p in &order[1..] {
        let candidates = per_point[p];
        let mut used = vec![false; candidates.len()];
        let mut next: Vec<Option<&LabeledMode>> = vec![None; count];
        for (r, prev) in current.iter().enumerate() {
            if prev.ambiguous {
                continue;
            }
            if let Some(c) = (0..candidates.len())
                .find(|&c| !used[c] && !candidates[c].ambiguous && candidates[c].label == prev.label)
            {
                used[c] = true;
                next[r] = Some(&candidates[c]);
            }
        }
        for r in 0..count {
            if next[r].is_some() {
                continue;
            }
            let target = current[r].pair.lambda;
            let c = (0..candidates.len())
                .filter(|&c| !used[c])
                .min_by(|&a, &b| {
                    (candidates[a].pair.lambda - target)
                        .abs()
                        .total_cmp(&(candidates[b].pair.lambda - target).abs())
                })
                .ok_or_else(|| CliError::Config(format!("ran out of {family} modes while tracking")))?;
            used[c] = true;
            next[r] = Some(&candidates[c]);
        }
        for (r, mode) in next.into_iter().enumerate() {
            let mode = mode.expect("every row was assigned");
            lambdas[r][p] = mode.pair.lambda;
            current[r] = mode;
        }
    }

    Ok(first[..count]
        .iter()
        .zip(lambdas)
        .map(|(mode, ls)| SweepRow {
            label: mode.label,
            quantity: Quantity::Krho,
            values: ls.into_iter().map(|l| Complex64::new((-l).sqrt(), 0.0)).collect(),
        })
        .collect())
}

/// `k_ρ` of the first `modes_per_family` modes as one relative permittivity
/// is swept with the other held at 1. One eigensolve per family.
pub fn sweep_anisotropy(
    geometry: &EccentricGeometry,
    ratios: &[f64],
    vary: Vary,
    radial_nodes: usize,
    azimuthal_nodes: usize,
    families: &[ModeFamily],
    modes_per_family: usize,
    options: &SolveOptions,
) -> Result<SweepResult, CliError> {
    let media = ratios
        .iter()
        .map(|&r| {
            match vary {
                Vary::Transverse => UniaxialMedium::dielectric(r, 1.0),
                Vary::Axial => UniaxialMedium::dielectric(1.0, r),
            }
            .map_err(|e| CliError::Config(format!("ratio {r}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let t = Instant::now();
    let solutions = families
        .iter()
        .map(|&f| solve_family(geometry, radial_nodes, azimuthal_nodes, f, modes_per_family, options))
        .collect::<Result<Vec<_>, _>>()?;
    let solve_seconds = t.elapsed().as_secs_f64();

    let modes: Vec<&LabeledMode> = solutions.iter().flat_map(|s| &s.modes).collect();
    let points = media
        .par_iter()
        .map(|medium| {
            let t = Instant::now();
            let values = modes
                .iter()
                .map(|m| radial(m.pair.lambda, medium, m.label.family, None))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((values, t.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let rows = modes
        .iter()
        .enumerate()
        .map(|(k, m)| SweepRow {
            label: m.label,
            quantity: Quantity::Krho,
            values: points.iter().map(|(v, _)| v[k]).collect(),
        })
        .collect();
    let mut prov = provenance(geometry, true, radial_nodes, azimuthal_nodes, None, options);
    prov.eigensolves = solutions.len();
    prov.eigensolve_wall_clock_s = solve_seconds;
    prov.wall_clock_s = points.iter().map(|(_, s)| *s).collect();
    Ok(SweepResult {
        kind: SweepKind::Anisotropy,
        axis_name: match vary {
            Vary::Transverse => "eps_rs",
            Vary::Axial => "eps_rz",
        }
        .into(),
        axis: ratios.to_vec(),
        rows,
        provenance: prov,
    })
}

/// Modes solved per family when looking for named modes.
fn search_depth(wanted: usize) -> usize {
    (2 * wanted + 4).max(8)
}

/// `k_z` of the named modes over a list of frequencies. One eigensolve per
/// family that appears among `modes`.
pub fn sweep_frequency(
    geometry: &EccentricGeometry,
    medium: &UniaxialMedium,
    frequencies_hz: &[f64],
    radial_nodes: usize,
    azimuthal_nodes: usize,
    modes: &[ModeLabel],
    options: &SolveOptions,
) -> Result<SweepResult, CliError> {
    if frequencies_hz.is_empty() {
        return Err(CliError::Config("frequency sweep needs a [frequency] range".into()));
    }
    if frequencies_hz.windows(2).any(|w| !(w[1] > w[0])) || !(frequencies_hz[0] > 0.0) {
        return Err(CliError::Config("frequencies must be positive and ascending".into()));
    }
    if modes.is_empty() {
        return Err(CliError::Config("frequency sweep needs at least one mode label".into()));
    }

    let t = Instant::now();
    let mut eigensolves = 0;
    let mut selected: Vec<(ModeLabel, f64)> = Vec::with_capacity(modes.len());
    for family in ModeFamily::ALL {
        let wanted: Vec<&ModeLabel> = modes.iter().filter(|l| l.family == family).collect();
        if wanted.is_empty() {
            continue;
        }
        let depth = search_depth(wanted.len()).min(available_modes(radial_nodes, azimuthal_nodes, family));
        let solution = solve_family(geometry, radial_nodes, azimuthal_nodes, family, depth, options)?;
        eigensolves += 1;
        for label in wanted {
            let mode = solution.modes.iter().find(|m| m.label == *label).ok_or_else(|| {
                CliError::Config(format!("mode {label} is not among the first {depth} {family} modes"))
            })?;
            selected.push((*label, mode.pair.lambda));
        }
    }
    // Keep the caller's order.
    selected.sort_by_key(|(l, _)| modes.iter().position(|m| m == l));
    let solve_seconds = t.elapsed().as_secs_f64();

    let points = frequencies_hz
        .par_iter()
        .map(|&f| {
            let t = Instant::now();
            let values = selected
                .iter()
                .map(|(label, lambda)| axial(radial(*lambda, medium, label.family, Some(f))?, medium, f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((values, t.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let rows = selected
        .iter()
        .enumerate()
        .map(|(k, (label, _))| SweepRow {
            label: *label,
            quantity: Quantity::Kz,
            values: points.iter().map(|(v, _)| v[k]).collect(),
        })
        .collect();
    let mut prov = provenance(geometry, true, radial_nodes, azimuthal_nodes, Some(medium), options);
    prov.eigensolves = eigensolves;
    prov.eigensolve_wall_clock_s = solve_seconds;
    prov.wall_clock_s = points.iter().map(|(_, s)| *s).collect();
    Ok(SweepResult {
        kind: SweepKind::Frequency,
        axis_name: "f_ghz".into(),
        axis: frequencies_hz.iter().map(|f| f * 1e-9).collect(),
        rows,
        provenance: prov,
    })
}
