//! The single-geometry mode table.

use eccoax_core::{ModeFamily, ModeLabel, SolveOptions};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::pipeline::{axial, radial, solve_family, FamilySolution};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub label: ModeLabel,
    pub ambiguous: bool,
    pub lambda: f64,
    pub k_rho: Complex64,
    /// `None` when the configuration gives no frequency.
    pub k_z: Option<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub rows: Vec<ModeRow>,
    pub solutions: Vec<FamilySolution>,
    pub frequency_hz: Option<f64>,
}

impl SolveReport {
    pub fn assembly_seconds(&self) -> f64 {
        self.solutions.iter().map(|s| s.assembly_seconds).sum()
    }

    pub fn solve_seconds(&self) -> f64 {
        self.solutions.iter().map(|s| s.solve_seconds).sum()
    }
}

/// Solves the configured geometry for each requested family.
pub fn run_solve(cfg: &RunConfig) -> Result<SolveReport, CliError> {
    let geometry = cfg.geometry()?;
    let medium = cfg.medium()?;
    let frequency_hz = match cfg.frequencies_hz()?.as_slice() {
        [] => None,
        [f] => Some(*f),
        _ => return Err(CliError::Config("solve takes a single frequency (frequency.f_ghz)".into())),
    };
    let families = cfg.solve.family.families();
    if frequency_hz.is_none() && !medium.is_lossless() && families.contains(&ModeFamily::Tm) {
        return Err(CliError::Config(
            "a lossy medium needs frequency.f_ghz to define its complex permittivity".into(),
        ));
    }

    let options = SolveOptions::new(cfg.solve.num_modes);
    let mut solutions = Vec::with_capacity(families.len());
    let mut rows = Vec::new();
    for family in families {
        let s = solve_family(&geometry, cfg.grid.m, cfg.grid.n, family, cfg.solve.num_modes, &options)?;
        for mode in &s.modes {
            let k_rho = radial(mode.pair.lambda, &medium, family, frequency_hz)?;
            let k_z = frequency_hz.map(|f| axial(k_rho, &medium, f)).transpose()?;
            rows.push(ModeRow {
                label: mode.label,
                ambiguous: mode.ambiguous,
                lambda: mode.pair.lambda,
                k_rho,
                k_z,
                residual: mode.pair.residual,
            });
        }
        solutions.push(s);
    }
    Ok(SolveReport {
        rows,
        solutions,
        frequency_hz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(extra: &str) -> RunConfig {
        RunConfig::from_toml(&format!("[geometry]\nr1_mm = 5.0\nr0_mm = 0.25\nd_mm = 1.0\n{extra}")).unwrap()
    }

    #[test]
    fn table_one_case() {
        let cfg = config("[media]\neps_rs = 5.0\n[solve]\nnum_modes = 4\n");
        let report = run_solve(&cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        let first = &report.rows[0];
        assert_eq!(first.label.name(), "TM01");
        assert!((first.k_rho.re / (-first.lambda).sqrt() - 5f64.sqrt()).abs() < 1e-12);
        assert!(first.k_z.is_none());
    }

    #[test]
    fn frequency_gives_axial_wavenumbers() {
        let cfg = config("[solve]\nfamily = \"both\"\nnum_modes = 2\n[frequency]\nf_ghz = 30.0\n");
        let report = run_solve(&cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows.iter().all(|r| r.k_z.is_some()));
        assert!(report.frequency_hz == Some(30e9));
    }

    #[test]
    fn lossy_without_frequency_is_a_config_error() {
        let cfg = config("[media]\nsigma_s = 0.1\n");
        assert!(matches!(run_solve(&cfg), Err(CliError::Config(_))));
        let cfg = config("[frequency]\nf_start_ghz = 1.0\nf_stop_ghz = 2.0\nf_points = 2\n");
        assert!(matches!(run_solve(&cfg), Err(CliError::Config(_))));
    }
}
