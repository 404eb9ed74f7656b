//! TOML run configuration. Lengths are in millimetres and frequencies in
//! gigahertz here; everything is converted to SI before it reaches the solver.

use std::path::Path;

use eccoax_core::{EccentricGeometry, ModeFamily, ModeLabel, UniaxialMedium};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub media: MediaConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub solve: SolveConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<FrequencyConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub r1_mm: f64,
    pub r0_mm: f64,
    pub d_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MediaConfig {
    pub mu_rs: f64,
    pub mu_rz: f64,
    pub eps_rs: f64,
    pub eps_rz: f64,
    pub sigma_s: f64,
    pub sigma_z: f64,
}

impl Default for MediaConfig {
    fn default() -> Self {
        Self {
            mu_rs: 1.0,
            mu_rz: 1.0,
            eps_rs: 1.0,
            eps_rz: 1.0,
            sigma_s: 0.0,
            sigma_z: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { m: 10, n: 41 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyChoice {
    #[serde(rename = "TM")]
    Tm,
    #[serde(rename = "TE")]
    Te,
    #[serde(rename = "both")]
    Both,
}

impl FamilyChoice {
    pub fn families(self) -> Vec<ModeFamily> {
        match self {
            Self::Tm => vec![ModeFamily::Tm],
            Self::Te => vec![ModeFamily::Te],
            Self::Both => ModeFamily::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveConfig {
    pub family: FamilyChoice,
    pub num_modes: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            family: FamilyChoice::Tm,
            num_modes: 6,
        }
    }
}

/// Either a single frequency or an inclusive linear range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_start_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_stop_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vary {
    Transverse,
    Axial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Offsets as fractions of `r1` for `sweep-ecc`.
    pub offsets: Vec<f64>,
    /// Relative permittivities for `sweep-aniso`.
    pub ratios: Vec<f64>,
    pub vary: Vary,
    /// Tracked labels for `sweep-freq`.
    pub modes: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            offsets: vec![0.05, 0.10, 0.15, 0.20],
            ratios: vec![1.0, 2.0, 5.0, 10.0],
            vary: Vary::Transverse,
            modes: vec!["TM01".into(), "TM11".into()],
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks every invariant so that later stages fail only for numerical reasons.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.geometry;
        for (name, v) in [("r1_mm", g.r1_mm), ("r0_mm", g.r0_mm)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!("geometry.{name} must be positive, got {v}")));
            }
        }
        if !(g.d_mm.is_finite() && g.d_mm >= 0.0) {
            return Err(CliError::Config(format!("geometry.d_mm must be non-negative, got {}", g.d_mm)));
        }
        if g.d_mm + g.r0_mm >= g.r1_mm {
            return Err(CliError::Config(format!(
                "geometry requires d_mm + r0_mm < r1_mm, got {} + {} >= {}",
                g.d_mm, g.r0_mm, g.r1_mm
            )));
        }
        self.geometry()?;
        self.medium()?;
        if self.grid.m < 3 {
            return Err(CliError::Config(format!("grid.M must be at least 3, got {}", self.grid.m)));
        }
        if self.grid.n < 5 {
            return Err(CliError::Config(format!("grid.N must be at least 5, got {}", self.grid.n)));
        }
        if self.solve.num_modes < 1 {
            return Err(CliError::Config("solve.num_modes must be at least 1".into()));
        }
        self.frequencies_hz()?;
        if let Some(bad) = self.sweep.offsets.iter().find(|&&o| !(o.is_finite() && o >= 0.0)) {
            return Err(CliError::Config(format!("sweep.offsets must be non-negative, got {bad}")));
        }
        if let Some(bad) = self.sweep.ratios.iter().find(|&&r| !(r.is_finite() && r > 0.0)) {
            return Err(CliError::Config(format!("sweep.ratios must be positive, got {bad}")));
        }
        self.tracked_modes()?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<EccentricGeometry, CliError> {
        let g = &self.geometry;
        EccentricGeometry::from_millimeters(g.r1_mm, g.r0_mm, g.d_mm).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn medium(&self) -> Result<UniaxialMedium, CliError> {
        let m = &self.media;
        UniaxialMedium::new(m.mu_rs, m.mu_rz, m.eps_rs, m.eps_rz, m.sigma_s, m.sigma_z)
            .map_err(|e| CliError::Config(format!("media: {e}")))
    }

    /// Frequencies in Hz, ascending; empty when no `[frequency]` section is given.
    pub fn frequencies_hz(&self) -> Result<Vec<f64>, CliError> {
        let Some(f) = &self.frequency else {
            return Ok(Vec::new());
        };
        let bad = |msg: &str| Err(CliError::Config(format!("frequency: {msg}")));
        let ghz = match (f.f_ghz, f.f_start_ghz, f.f_stop_ghz, f.f_points) {
            (Some(f), None, None, None) => vec![f],
            (None, Some(a), Some(b), Some(n)) => {
                if n < 1 {
                    return bad("f_points must be at least 1");
                }
                if n == 1 {
                    if a != b {
                        return bad("a single point needs f_start_ghz = f_stop_ghz");
                    }
                    vec![a]
                } else {
                    if !(b > a) {
                        return bad("f_stop_ghz must exceed f_start_ghz");
                    }
                    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
                }
            }
            _ => return bad("give either f_ghz or all of f_start_ghz, f_stop_ghz, f_points"),
        };
        if let Some(v) = ghz.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(CliError::Config(format!("frequency: values must be positive, got {v} GHz")));
        }
        Ok(ghz.into_iter().map(|g| g * 1e9).collect())
    }

    pub fn tracked_modes(&self) -> Result<Vec<ModeLabel>, CliError> {
        self.sweep
            .modes
            .iter()
            .map(|s| s.parse().map_err(|e| CliError::Config(format!("sweep.modes: {e}"))))
            .collect()
    }
}
