use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("offset {offset} m is below the concentric threshold; use the identity map")]
    DegenerateGeometry { offset: f64 },
    #[error("radius {rho} m lies outside the annulus [{r0}, {r1}] m")]
    OutOfDomain { rho: f64, r0: f64, r1: f64 },
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("angular frequency must be positive and finite, got {0} rad/s")]
    NonPositiveFrequency(f64),
    #[error("conductive medium needs a frequency to form its complex permittivity")]
    FrequencyRequired,
    #[error("invalid grid resolution: {0}")]
    InvalidResolution(String),
    #[error("invalid annulus: r0 = {r0} m, r1 = {r1} m")]
    InvalidAnnulus { r0: f64, r1: f64 },
    #[error("index ({ring}, {angle}) is not an unknown of this discretization")]
    IndexOutOfRange { ring: usize, angle: usize },
    #[error("grid annulus [{grid_r0}, {grid_r1}] m does not match mapped annulus [{map_r0}, {map_r1}] m")]
    MismatchedDomain {
        grid_r0: f64,
        grid_r1: f64,
        map_r0: f64,
        map_r1: f64,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigensolver failed: {0}")]
    ConvergenceFailure(String),
    #[error("requested {requested} eigenpairs but the operator has only {available} unknowns")]
    InsufficientSpectrum { requested: usize, available: usize },
    #[error("invalid mode label: {0}")]
    InvalidLabel(String),
    #[error("bracketing found {found} of {requested} roots below k = {bound} rad/m")]
    BracketingFailure {
        found: usize,
        requested: usize,
        bound: f64,
    },
}
