//! Uniaxial constitutive parameters and the anisotropy factors that turn
//! geometry eigenvalues into wavenumbers.
//!
//! Tensors are `diag(p_s, p_s, p_z)`. Permittivity picks up a loss term
//! `i σ / (ω ε₀)` under the `e^{−iωt}` convention, so every imaginary part is
//! non-negative.

use core::fmt;

use alloc::format;
use num_complex::Complex64;

use crate::constants::{VACUUM_PERMEABILITY, VACUUM_PERMITTIVITY};
use crate::geometry::ConcentricMap;
use crate::{Error, Result};

/// TM modes carry `F = E_z` with `p = ε`; TE modes carry `F = H_z` with `p = μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeFamily {
    Tm,
    Te,
}

impl ModeFamily {
    pub const ALL: [ModeFamily; 2] = [ModeFamily::Tm, ModeFamily::Te];

    pub fn as_str(self) -> &'static str {
        match self {
            ModeFamily::Tm => "TM",
            ModeFamily::Te => "TE",
        }
    }
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative permeability/permittivity (transverse `s`, axial `z`) and
/// conductivities in S/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialMedium {
    mu_rs: f64,
    mu_rz: f64,
    eps_rs: f64,
    eps_rz: f64,
    sigma_s: f64,
    sigma_z: f64,
}

impl Default for UniaxialMedium {
    fn default() -> Self {
        Self::vacuum()
    }
}

impl UniaxialMedium {
    pub fn new(
        mu_rs: f64,
        mu_rz: f64,
        eps_rs: f64,
        eps_rz: f64,
        sigma_s: f64,
        sigma_z: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("mu_rs", mu_rs),
            ("mu_rz", mu_rz),
            ("eps_rs", eps_rs),
            ("eps_rz", eps_rz),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidMedium(format!("{name} must be positive, got {value}")));
            }
        }
        for (name, value) in [("sigma_s", sigma_s), ("sigma_z", sigma_z)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidMedium(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        Ok(Self {
            mu_rs,
            mu_rz,
            eps_rs,
            eps_rz,
            sigma_s,
            sigma_z,
        })
    }

    pub const fn vacuum() -> Self {
        Self {
            mu_rs: 1.0,
            mu_rz: 1.0,
            eps_rs: 1.0,
            eps_rz: 1.0,
            sigma_s: 0.0,
            sigma_z: 0.0,
        }
    }

    /// Lossless dielectric with vacuum permeability.
    pub fn dielectric(eps_rs: f64, eps_rz: f64) -> Result<Self> {
        Self::new(1.0, 1.0, eps_rs, eps_rz, 0.0, 0.0)
    }

    pub fn mu_rs(&self) -> f64 {
        self.mu_rs
    }
    pub fn mu_rz(&self) -> f64 {
        self.mu_rz
    }
    pub fn eps_rs(&self) -> f64 {
        self.eps_rs
    }
    pub fn eps_rz(&self) -> f64 {
        self.eps_rz
    }
    pub fn sigma_s(&self) -> f64 {
        self.sigma_s
    }
    pub fn sigma_z(&self) -> f64 {
        self.sigma_z
    }

    pub fn is_lossless(&self) -> bool {
        self.sigma_s == 0.0 && self.sigma_z == 0.0
    }

    /// Complex relative permittivities `(ε_s, ε_z)` at angular frequency `omega`.
    pub fn complex_relative_permittivity(&self, omega: f64) -> Result<(Complex64, Complex64)> {
        check_omega(omega)?;
        let loss = 1.0 / (omega * VACUUM_PERMITTIVITY);
        Ok((
            Complex64::new(self.eps_rs, self.sigma_s * loss),
            Complex64::new(self.eps_rz, self.sigma_z * loss),
        ))
    }

    /// `p̃_s / p̃_z` for the given family (`ε` ratio for TM, `μ` ratio for TE).
    pub fn anisotropy_ratio(&self, family: ModeFamily, omega: f64) -> Result<Complex64> {
        check_omega(omega)?;
        match family {
            ModeFamily::Tm => {
                let (eps_s, eps_z) = self.complex_relative_permittivity(omega)?;
                Ok(eps_s / eps_z)
            }
            ModeFamily::Te => Ok(Complex64::new(self.mu_rs / self.mu_rz, 0.0)),
        }
    }

    /// Frequency-independent ratio, available when the relevant parameters
    /// carry no loss. TE ratios never depend on frequency.
    pub fn static_anisotropy_ratio(&self, family: ModeFamily) -> Result<f64> {
        match family {
            ModeFamily::Te => Ok(self.mu_rs / self.mu_rz),
            ModeFamily::Tm if self.is_lossless() => Ok(self.eps_rs / self.eps_rz),
            ModeFamily::Tm => Err(Error::FrequencyRequired),
        }
    }

    /// `k_s² = ω² μ₀ μ_rs ε₀ ε_s` in 1/m², the medium wavenumber built from
    /// the transverse parameters.
    pub fn transverse_wavenumber_squared(&self, omega: f64) -> Result<Complex64> {
        let (eps_s, _) = self.complex_relative_permittivity(omega)?;
        Ok(eps_s * (omega * omega * VACUUM_PERMEABILITY * self.mu_rs * VACUUM_PERMITTIVITY))
    }

    /// Absolute axial parameter of the mapped medium, `|J|⁻¹ p̃_z`, in F/m (TM)
    /// or H/m (TE). The transverse parameter is unchanged by the map.
    pub fn transformed_axial_parameter(
        &self,
        map: &ConcentricMap,
        rho: f64,
        phi: f64,
        family: ModeFamily,
        omega: f64,
    ) -> Result<Complex64> {
        let weight = map.jacobian_inv(rho, phi)?;
        let axial = match family {
            ModeFamily::Tm => self.complex_relative_permittivity(omega)?.1 * VACUUM_PERMITTIVITY,
            ModeFamily::Te => {
                check_omega(omega)?;
                Complex64::new(self.mu_rz * VACUUM_PERMEABILITY, 0.0)
            }
        };
        Ok(axial * weight)
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveFrequency(omega))
    }
}

/// `ω = 2π f`.
pub fn angular_frequency(f_hz: f64) -> f64 {
    crate::constants::TAU * f_hz
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SPEED_OF_LIGHT;
    use crate::geometry::EccentricGeometry;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn fig5_medium() -> UniaxialMedium {
        UniaxialMedium::new(1.0, 1.0, 5.6, 4.6, 0.38, 0.34).unwrap()
    }

    #[test]
    fn lossy_permittivity_at_one_gigahertz() {
        let (eps_s, eps_z) = fig5_medium()
            .complex_relative_permittivity(angular_frequency(1e9))
            .unwrap();
        assert_eq!(eps_s.re, 5.6);
        assert!(rel(eps_s.im, 6.830_539_362_118_491) < 1e-12);
        assert_eq!(eps_z.re, 4.6);
        assert!(rel(eps_z.im, 6.830_539_362_118_491 * 0.34 / 0.38) < 1e-12);
    }

    #[test]
    fn lossless_permittivity_is_real() {
        let (s, z) = UniaxialMedium::dielectric(5.0, 1.0)
            .unwrap()
            .complex_relative_permittivity(1e9)
            .unwrap();
        assert_eq!(s.im, 0.0);
        assert_eq!(z.im, 0.0);
    }

    #[test]
    fn loss_term_decreases_with_frequency() {
        let m = fig5_medium();
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let (s, _) = m.complex_relative_permittivity(angular_frequency(k as f64 * 1e9)).unwrap();
            assert!(s.im < prev);
            prev = s.im;
        }
    }

    #[test]
    fn anisotropy_ratios() {
        let w = angular_frequency(1e9);
        for fam in ModeFamily::ALL {
            assert_eq!(UniaxialMedium::vacuum().anisotropy_ratio(fam, w).unwrap(), Complex64::new(1.0, 0.0));
        }
        let case1 = UniaxialMedium::dielectric(5.0, 1.0).unwrap();
        assert_eq!(case1.anisotropy_ratio(ModeFamily::Tm, w).unwrap(), Complex64::new(5.0, 0.0));
        let case2 = UniaxialMedium::dielectric(1.0, 5.0).unwrap();
        assert!((case2.anisotropy_ratio(ModeFamily::Tm, w).unwrap() - Complex64::new(0.2, 0.0)).norm() < 1e-16);
        assert_eq!(case1.anisotropy_ratio(ModeFamily::Te, w).unwrap().re, 1.0);
    }

    #[test]
    fn static_ratio_needs_lossless_tm() {
        assert_eq!(UniaxialMedium::dielectric(5.0, 1.0).unwrap().static_anisotropy_ratio(ModeFamily::Tm), Ok(5.0));
        assert_eq!(fig5_medium().static_anisotropy_ratio(ModeFamily::Tm), Err(Error::FrequencyRequired));
        assert_eq!(fig5_medium().static_anisotropy_ratio(ModeFamily::Te), Ok(1.0));
    }

    #[test]
    fn vacuum_wavenumber_at_one_gigahertz() {
        let w = angular_frequency(1e9);
        let ks2 = UniaxialMedium::vacuum().transverse_wavenumber_squared(w).unwrap();
        assert_eq!(ks2.im, 0.0);
        assert!(rel(libm::sqrt(ks2.re), 20.958_450_219_516_36) < 1e-12);
        assert!(rel(libm::sqrt(ks2.re), w / SPEED_OF_LIGHT) < 1e-9);
    }

    #[test]
    fn lossy_wavenumber_composes() {
        let w = angular_frequency(1e9);
        let m = fig5_medium();
        let ks2 = m.transverse_wavenumber_squared(w).unwrap();
        let (eps_s, _) = m.complex_relative_permittivity(w).unwrap();
        let expect = eps_s * (w * w * VACUUM_PERMEABILITY * VACUUM_PERMITTIVITY);
        assert!((ks2 - expect).norm() / expect.norm() < 1e-15);
        assert!(ks2.im > 0.0);
    }

    #[test]
    fn static_limit_wavenumber_vanishes() {
        let ks2 = UniaxialMedium::vacuum().transverse_wavenumber_squared(1e-3).unwrap();
        assert!(ks2.norm() < 1e-20);
    }

    #[test]
    fn rejects_bad_frequency_and_media() {
        let m = UniaxialMedium::vacuum();
        assert_eq!(m.complex_relative_permittivity(0.0), Err(Error::NonPositiveFrequency(0.0)));
        assert!(m.transverse_wavenumber_squared(-1.0).is_err());
        assert!(m.anisotropy_ratio(ModeFamily::Te, f64::NAN).is_err());
        assert!(UniaxialMedium::new(1.0, 0.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(UniaxialMedium::new(1.0, 1.0, 1.0, 1.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn transformed_axial_parameter_carries_the_weight() {
        let g = EccentricGeometry::from_millimeters(5.0, 0.25, 1.0).unwrap();
        let map = ConcentricMap::build(&g).unwrap();
        let w = angular_frequency(1e9);
        let eps_z = UniaxialMedium::dielectric(5.0, 1.0)
            .unwrap()
            .transformed_axial_parameter(&map, 2.5e-3, 0.0, ModeFamily::Tm, w)
            .unwrap();
        assert!(rel(eps_z.re / VACUUM_PERMITTIVITY, 1.405_682_533_445_735_5) < 1e-12);

        let concentric = ConcentricMap::build(&EccentricGeometry::from_millimeters(5.0, 0.25, 0.0).unwrap()).unwrap();
        let mu_z = fig5_medium()
            .transformed_axial_parameter(&concentric, 1e-3, 2.0, ModeFamily::Te, w)
            .unwrap();
        assert_eq!(mu_z.re, VACUUM_PERMEABILITY);
    }
}
