//! Wavenumbers and axial field samples of solved modes.
//!
//! `k_ρ² = −(p̃_s/p̃_z) λ` and `k_z² = k_s² − k_ρ²`. The square roots follow the
//! forward-decaying branch of the `e^{−iωt}` convention: `Im ≥ 0` first, then
//! `Re ≥ 0` when the imaginary part vanishes.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::assembly::DiscreteOperator;
use crate::eigensolve::EigenPair;
use crate::labels::{LabeledMode, ModeLabel};
use crate::media::{ModeFamily, UniaxialMedium};
use crate::{Error, Result};

/// Principal root with `Re ≥ 0`; on the imaginary axis, `Im ≥ 0`.
fn principal_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

/// Root with `Im ≥ 0`; on the real axis, `Re ≥ 0`.
fn decaying_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

/// Radial wavenumber in rad/m from a geometry eigenvalue `lambda` (1/m², ≤ 0).
pub fn radial_wavenumber(
    lambda: f64,
    medium: &UniaxialMedium,
    family: ModeFamily,
    omega: f64,
) -> Result<Complex64> {
    let ratio = medium.anisotropy_ratio(family, omega)?;
    Ok(principal_sqrt(ratio * (-lambda)))
}

/// Radial wavenumber for a medium whose relevant ratio is frequency independent.
pub fn static_radial_wavenumber(lambda: f64, medium: &UniaxialMedium, family: ModeFamily) -> Result<Complex64> {
    let ratio = medium.static_anisotropy_ratio(family)?;
    Ok(principal_sqrt(Complex64::new(-ratio * lambda, 0.0)))
}

/// Axial wavenumber in rad/m.
pub fn axial_wavenumber(k_rho: Complex64, medium: &UniaxialMedium, omega: f64) -> Result<Complex64> {
    let ks2 = medium.transverse_wavenumber_squared(omega)?;
    Ok(decaying_sqrt(ks2 - k_rho * k_rho))
}

/// A labeled mode evaluated for one medium and frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub label: ModeLabel,
    pub lambda: f64,
    pub k_rho: Complex64,
    pub k_z: Complex64,
    pub frequency_hz: f64,
    pub medium: UniaxialMedium,
}

impl ModeSolution {
    pub fn evaluate(mode: &LabeledMode, medium: &UniaxialMedium, frequency_hz: f64) -> Result<Self> {
        let omega = crate::media::angular_frequency(frequency_hz);
        let k_rho = radial_wavenumber(mode.pair.lambda, medium, mode.label.family, omega)?;
        let k_z = axial_wavenumber(k_rho, medium, omega)?;
        Ok(Self {
            label: mode.label,
            lambda: mode.pair.lambda,
            k_rho,
            k_z,
            frequency_hz,
            medium: *medium,
        })
    }
}

/// One node of the full `M × N` grid with its physical (eccentric) position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub ring: usize,
    pub angle: usize,
    pub rho: f64,
    pub phi: f64,
    pub rho_tilde: f64,
    pub phi_tilde: f64,
    pub value: f64,
}

/// Expands an eigenvector onto every grid node, reinstating the Dirichlet
/// zeros of TM modes and the duplicated seam column.
pub fn field_samples(pair: &EigenPair, op: &DiscreteOperator) -> Result<Vec<FieldSample>> {
    let ix = op.indexing();
    if pair.vector.len() != ix.total_unknowns() {
        return Err(Error::DimensionMismatch {
            expected: ix.total_unknowns(),
            got: pair.vector.len(),
        });
    }
    let grid = op.grid();
    let map = op.map();
    let mut out = Vec::with_capacity(grid.radial_nodes() * grid.azimuthal_nodes());
    for ring in 0..grid.radial_nodes() {
        for angle in 0..grid.azimuthal_nodes() {
            let (rho, phi) = (grid.rho(ring), grid.phi(angle));
            let value = if ix.contains_ring(ring) {
                pair.vector[ix.index(ring, ix.fold_angle(angle))?]
            } else {
                0.0
            };
            let (rho_tilde, phi_tilde) = map.map_to_eccentric(rho, phi)?;
            out.push(FieldSample {
                ring,
                angle,
                rho,
                phi,
                rho_tilde,
                phi_tilde,
                value,
            });
        }
    }
    Ok(out)
}
