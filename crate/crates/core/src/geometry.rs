//! Conformal map between the eccentric annulus and a concentric one.
//!
//! The inner conductor (radius `r̃₀`, centre at `d̃` on the real axis) and the
//! outer conductor (radius `r̃₁`, centred at the origin) share a pair of
//! inverse points `x̃₁ < x̃₂`, the roots of `x² + c̃x + r̃₁² = 0`. The map
//!
//! ```text
//! w = x̃₂ (z − x̃₁) / (z − x̃₂)
//! ```
//!
//! sends both circles to circles centred at the origin and keeps the outer
//! radius at `r̃₁`. It is an involution, so the same formula maps concentric
//! points back to the physical plane. Its squared modulus of the derivative,
//! written in concentric polar coordinates, is the weight
//!
//! ```text
//! |J|⁻¹ = (1 − x̃₁/x̃₂)² / (1 − 2ρ cos φ / x̃₂ + ρ² / x̃₂²)²
//! ```
//!
//! which scales the axial constitutive parameters.

use alloc::format;
use num_complex::Complex64;

use crate::constants::TAU;
use crate::{Error, Result};

/// Offsets below `DEGENERACY_RATIO · r̃₁` are treated as concentric.
pub const DEGENERACY_RATIO: f64 = 1e-9;

/// Relative slack allowed when checking that a radius lies on the annulus.
const DOMAIN_SLACK: f64 = 1e-12;

/// Physical cross-section: outer radius, inner radius and inner offset, in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EccentricGeometry {
    r1_outer: f64,
    r0_inner: f64,
    offset: f64,
}

/// Inverse points of the two conductors and the auxiliary coefficient `c̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversePoints {
    pub x1: f64,
    pub x2: f64,
    pub c: f64,
}

impl EccentricGeometry {
    pub fn new(r1_outer: f64, r0_inner: f64, offset: f64) -> Result<Self> {
        let finite = r1_outer.is_finite() && r0_inner.is_finite() && offset.is_finite();
        if !finite {
            return Err(Error::InvalidGeometry(format!(
                "non-finite dimensions (r1 = {r1_outer}, r0 = {r0_inner}, d = {offset})"
            )));
        }
        if r1_outer <= 0.0 || r0_inner <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "radii must be positive (r1 = {r1_outer}, r0 = {r0_inner})"
            )));
        }
        if offset < 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "offset must be non-negative (d = {offset})"
            )));
        }
        if offset + r0_inner >= r1_outer {
            return Err(Error::InvalidGeometry(format!(
                "inner conductor must lie strictly inside the outer one: d + r0 = {} >= r1 = {}",
                offset + r0_inner,
                r1_outer
            )));
        }
        Ok(Self {
            r1_outer,
            r0_inner,
            offset,
        })
    }

    /// Same as [`EccentricGeometry::new`] with dimensions given in millimetres.
    pub fn from_millimeters(r1_mm: f64, r0_mm: f64, d_mm: f64) -> Result<Self> {
        Self::new(r1_mm * 1e-3, r0_mm * 1e-3, d_mm * 1e-3)
    }

    pub fn concentric(r1_outer: f64, r0_inner: f64) -> Result<Self> {
        Self::new(r1_outer, r0_inner, 0.0)
    }

    pub fn r1_outer(&self) -> f64 {
        self.r1_outer
    }

    pub fn r0_inner(&self) -> f64 {
        self.r0_inner
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Copy of this geometry with a different offset.
    pub fn with_offset(&self, offset: f64) -> Result<Self> {
        Self::new(self.r1_outer, self.r0_inner, offset)
    }

    pub fn is_concentric(&self) -> bool {
        self.offset < DEGENERACY_RATIO * self.r1_outer
    }

    /// Returns `c̃` and the inverse points with `x1 ≤ x2`.
    ///
    /// `x2` is taken from the quadratic formula (no cancellation since `c̃ < 0`)
    /// and `x1 = r̃₁² / x2`, which keeps the product exact for small offsets.
    pub fn inverse_points(&self) -> Result<InversePoints> {
        if self.is_concentric() {
            return Err(Error::DegenerateGeometry {
                offset: self.offset,
            });
        }
        let (r1, r0, d) = (self.r1_outer, self.r0_inner, self.offset);
        let c = (r0 * r0 - r1 * r1 - d * d) / d;
        let disc = c * c - 4.0 * r1 * r1;
        if disc <= 0.0 {
            return Err(Error::InvalidGeometry(format!(
                "no real inverse points (c^2 - 4 r1^2 = {disc})"
            )));
        }
        let x2 = 0.5 * (-c + libm::sqrt(disc));
        let x1 = r1 * r1 / x2;
        Ok(InversePoints { x1, x2, c })
    }
}

/// Data of the map onto the concentric annulus `r0_mapped ≤ ρ ≤ r1_mapped`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentricMap {
    geometry: EccentricGeometry,
    inverse: Option<InversePoints>,
    r0_mapped: f64,
    r1_mapped: f64,
}

impl ConcentricMap {
    pub fn build(geometry: &EccentricGeometry) -> Result<Self> {
        // Re-validate: the fields are private but a copy may have come from elsewhere.
        let geometry = EccentricGeometry::new(
            geometry.r1_outer,
            geometry.r0_inner,
            geometry.offset,
        )?;
        if geometry.is_concentric() {
            return Ok(Self {
                geometry,
                inverse: None,
                r0_mapped: geometry.r0_inner,
                r1_mapped: geometry.r1_outer,
            });
        }
        let inverse = geometry.inverse_points()?;
        let near = geometry.offset + geometry.r0_inner;
        let r0_mapped = inverse.x2 * libm::fabs((near - inverse.x1) / (near - inverse.x2));
        Ok(Self {
            geometry,
            inverse: Some(inverse),
            r0_mapped,
            r1_mapped: geometry.r1_outer,
        })
    }

    pub fn geometry(&self) -> &EccentricGeometry {
        &self.geometry
    }

    /// `None` for the identity map of a concentric geometry.
    pub fn inverse_points(&self) -> Option<InversePoints> {
        self.inverse
    }

    pub fn r0_mapped(&self) -> f64 {
        self.r0_mapped
    }

    pub fn r1_mapped(&self) -> f64 {
        self.r1_mapped
    }

    pub fn is_degenerate(&self) -> bool {
        self.inverse.is_none()
    }

    fn check_radius(&self, rho: f64) -> Result<()> {
        let slack = DOMAIN_SLACK * self.r1_mapped;
        if !rho.is_finite() || rho < self.r0_mapped - slack || rho > self.r1_mapped + slack {
            return Err(Error::OutOfDomain {
                rho,
                r0: self.r0_mapped,
                r1: self.r1_mapped,
            });
        }
        Ok(())
    }

    /// Inverse Jacobian determinant `|J|⁻¹` at a point of the concentric annulus.
    pub fn jacobian_inv(&self, rho: f64, phi: f64) -> Result<f64> {
        self.check_radius(rho)?;
        Ok(self.weight(rho, phi))
    }

    /// `|J|⁻¹` without the domain check.
    pub(crate) fn weight(&self, rho: f64, phi: f64) -> f64 {
        match self.inverse {
            None => 1.0,
            Some(InversePoints { x1, x2, .. }) => {
                let num = 1.0 - x1 / x2;
                let den = 1.0 - 2.0 * rho * libm::cos(phi) / x2 + rho * rho / (x2 * x2);
                (num * num) / (den * den)
            }
        }
    }

    /// Determinant of the Cartesian Jacobian of [`Self::map_to_eccentric`] by
    /// central differences of width `2·step`. Should equal
    /// [`Self::jacobian_inv`] up to the truncation error of the stencil.
    pub fn finite_difference_jacobian(&self, rho: f64, phi: f64, step: f64) -> Result<f64> {
        let (x, y) = (rho * libm::cos(phi), rho * libm::sin(phi));
        let image = |x: f64, y: f64| -> Result<(f64, f64)> {
            let (r, p) = self.map_to_eccentric(libm::hypot(x, y), libm::atan2(y, x))?;
            Ok((r * libm::cos(p), r * libm::sin(p)))
        };
        let (xp, xm) = (image(x + step, y)?, image(x - step, y)?);
        let (yp, ym) = (image(x, y + step)?, image(x, y - step)?);
        let h2 = 2.0 * step;
        let (dxx, dyx) = ((xp.0 - xm.0) / h2, (xp.1 - xm.1) / h2);
        let (dxy, dyy) = ((yp.0 - ym.0) / h2, (yp.1 - ym.1) / h2);
        Ok(dxx * dyy - dxy * dyx)
    }

    /// Physical polar coordinates `(ρ̃, φ̃)` of a concentric point, `φ̃ ∈ [0, 2π)`.
    pub fn map_to_eccentric(&self, rho: f64, phi: f64) -> Result<(f64, f64)> {
        self.check_radius(rho)?;
        Ok(self.apply(Complex64::from_polar(rho, phi)))
    }

    /// Concentric polar coordinates of a physical point. No domain check is
    /// made beyond finiteness; points outside the physical annulus map outside
    /// the concentric one.
    pub fn map_to_concentric(&self, rho_tilde: f64, phi_tilde: f64) -> (f64, f64) {
        self.apply(Complex64::from_polar(rho_tilde, phi_tilde))
    }

    fn apply(&self, z: Complex64) -> (f64, f64) {
        let w = match self.inverse {
            None => z,
            Some(InversePoints { x1, x2, .. }) => (z - x1) / (z - x2) * x2,
        };
        (w.norm(), wrap_angle(w.arg()))
    }
}

pub(crate) fn wrap_angle(phi: f64) -> f64 {
    let wrapped = phi - TAU * libm::floor(phi / TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}
