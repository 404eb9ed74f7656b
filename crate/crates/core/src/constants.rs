//! Physical constants (SI, CODATA 2018).

/// ε₀ in F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// μ₀ in H/m.
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// c in m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const TAU: f64 = core::f64::consts::TAU;
