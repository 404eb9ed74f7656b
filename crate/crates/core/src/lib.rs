//! Eigenmodes of eccentric coaxial waveguides filled with lossy uniaxial media.
//!
//! The eccentric annulus is mapped onto a concentric one by an inverse-point
//! Möbius map. All eccentricity then lives in a scalar weight on the axial
//! constitutive parameter, and the axial field obeys a weighted Helmholtz
//! problem whose eigenvalues depend on the geometry alone:
//!
//! ```text
//! ∇²_s F = λ |J|⁻¹ F,      k_ρ² = −(p_s / p_z) λ,      k_z² = k_s² − k_ρ²
//! ```
//!
//! The weighted problem is discretized on a polar grid with second-order
//! central differences and solved as a generalized eigenproblem `A v = λ B v`.
//! Media and frequency enter only afterwards, so one decomposition serves any
//! number of material or frequency points.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod constants;
pub mod eigensolve;
mod error;
pub mod geometry;
pub mod grid;
pub mod labels;
mod linalg;
pub mod media;
pub mod modes;
pub mod reference;
pub mod sparse;

pub use assembly::{assemble, DiscreteOperator};
pub use eigensolve::{solve_eigs, solve_eigs_with, EigenPair, SolveOptions, Spectrum};
pub use error::{Error, Result};
pub use geometry::{ConcentricMap, EccentricGeometry, InversePoints};
pub use grid::{PolarGrid, UnknownIndexing};
pub use labels::{label_modes, LabeledMode, ModeLabel, Parity};
pub use media::{ModeFamily, UniaxialMedium};
pub use modes::{axial_wavenumber, field_samples, radial_wavenumber, FieldSample, ModeSolution};
pub use reference::{concentric_cutoffs, CrossProductRoot};
