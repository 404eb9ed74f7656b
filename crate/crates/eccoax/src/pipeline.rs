//! Map, grid, assembly, eigensolve and labeling for one geometry and family.

use std::time::Instant;

use eccoax_core::modes::static_radial_wavenumber;
use eccoax_core::{
    assemble, axial_wavenumber, label_modes, radial_wavenumber, solve_eigs_with, ConcentricMap, DiscreteOperator,
    EccentricGeometry, LabeledMode, ModeFamily, PolarGrid, SolveOptions, Spectrum, UniaxialMedium,
};
use num_complex::Complex64;

use crate::error::CliError;

/// Everything produced by one eigensolve.
#[derive(Debug, Clone)]
pub struct FamilySolution {
    pub family: ModeFamily,
    pub operator: DiscreteOperator,
    pub spectrum: Spectrum,
    pub modes: Vec<LabeledMode>,
    pub assembly_seconds: f64,
    pub solve_seconds: f64,
}

pub fn build_operator(
    geometry: &EccentricGeometry,
    radial_nodes: usize,
    azimuthal_nodes: usize,
    family: ModeFamily,
) -> Result<DiscreteOperator, CliError> {
    let map = ConcentricMap::build(geometry)?;
    let grid = PolarGrid::new(map.r0_mapped(), map.r1_mapped(), radial_nodes, azimuthal_nodes)?;
    Ok(assemble(&grid, &map, family)?)
}

/// Solves for the `count` modes closest to cutoff zero and labels them.
pub fn solve_family(
    geometry: &EccentricGeometry,
    radial_nodes: usize,
    azimuthal_nodes: usize,
    family: ModeFamily,
    count: usize,
    options: &SolveOptions,
) -> Result<FamilySolution, CliError> {
    let t0 = Instant::now();
    let operator = build_operator(geometry, radial_nodes, azimuthal_nodes, family)?;
    let assembly_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let spectrum = solve_eigs_with(&operator, &SolveOptions { count, ..options.clone() })?;
    let modes = label_modes(spectrum.pairs.clone(), &operator);
    let solve_seconds = t1.elapsed().as_secs_f64();
    Ok(FamilySolution {
        family,
        operator,
        spectrum,
        modes,
        assembly_seconds,
        solve_seconds,
    })
}

/// Largest number of physical modes a grid can deliver for `family`.
pub fn available_modes(radial_nodes: usize, azimuthal_nodes: usize, family: ModeFamily) -> usize {
    let rings = match family {
        ModeFamily::Tm => radial_nodes.saturating_sub(2),
        ModeFamily::Te => radial_nodes,
    };
    let unknowns = rings * azimuthal_nodes.saturating_sub(1);
    unknowns.saturating_sub(usize::from(family == ModeFamily::Te))
}

/// `k_ρ` of an eigenvalue, using the static anisotropy ratio when there is no frequency.
pub fn radial(
    lambda: f64,
    medium: &UniaxialMedium,
    family: ModeFamily,
    frequency_hz: Option<f64>,
) -> Result<Complex64, CliError> {
    Ok(match frequency_hz {
        Some(f) => radial_wavenumber(lambda, medium, family, eccoax_core::media::angular_frequency(f))?,
        None => static_radial_wavenumber(lambda, medium, family)?,
    })
}

pub fn axial(k_rho: Complex64, medium: &UniaxialMedium, frequency_hz: f64) -> Result<Complex64, CliError> {
    Ok(axial_wavenumber(
        k_rho,
        medium,
        eccoax_core::media::angular_frequency(frequency_hz),
    )?)
}
