//! Subcommand implementations shared by the binary and the tests.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand};
use eccoax_core::{ConcentricMap, ModeFamily, PolarGrid, SolveOptions};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::output::{map_csv, matrix_dump, solve_csv, solve_json, sweep_csv, sweep_json};
use crate::pipeline::build_operator;
use crate::solve::run_solve;
use crate::sweeps::{sweep_anisotropy, sweep_eccentricity, sweep_frequency, SweepResult};
use crate::validate::run_validate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Mode table of the configured geometry.
    Solve,
    /// k_rho against inner-conductor offset (sweep.offsets, fractions of r1).
    SweepEcc,
    /// k_rho against one relative permittivity (sweep.ratios, sweep.vary).
    SweepAniso,
    /// k_z of named modes (sweep.modes) over the frequency range.
    SweepFreq,
    /// Oracle, convergence, Jacobian and structural checks.
    Validate,
    /// Grid nodes, their physical images and Jacobian weights.
    EmitMap,
}

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Modes per family.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Radial nodes.
    #[arg(short = 'M', global = true)]
    pub radial_nodes: Option<usize>,
    /// Azimuthal nodes including the duplicated 2π seam.
    #[arg(short = 'N', global = true)]
    pub azimuthal_nodes: Option<usize>,
    /// Write A and B as coordinate triples.
    #[arg(long, global = true)]
    pub dump_matrices: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: RunConfig) -> Result<RunConfig, CliError> {
        if let Some(m) = self.radial_nodes {
            cfg.grid.m = m;
        }
        if let Some(n) = self.azimuthal_nodes {
            cfg.grid.n = n;
        }
        if let Some(k) = self.modes {
            cfg.solve.num_modes = k;
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(p) = &self.output {
            cfg.output.path = Some(p.to_string_lossy().into_owned());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Loads the configuration, applies overrides and runs `command`.
pub fn run(command: Command, overrides: &Overrides) -> Result<(), CliError> {
    let path = overrides
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let cfg = overrides.apply(RunConfig::load(path)?)?;
    if let Some(dump) = &overrides.dump_matrices {
        dump_matrices(&cfg, dump)?;
    }
    match command {
        Command::Solve => solve(&cfg),
        Command::SweepEcc | Command::SweepAniso | Command::SweepFreq => {
            let t = Instant::now();
            let result = sweep(command, &cfg)?;
            eprintln!(
                "{} points, {} eigensolves, {:.3} s",
                result.axis.len(),
                result.provenance.eigensolves,
                t.elapsed().as_secs_f64()
            );
            write_sweep(&cfg, &result)
        }
        Command::Validate => {
            let report = run_validate(&cfg)?;
            emit(&cfg, None, &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(CliError::Validation(failed.join(", ")))
            }
        }
        Command::EmitMap => {
            let geometry = cfg.geometry()?;
            let map = ConcentricMap::build(&geometry)?;
            let grid = PolarGrid::new(map.r0_mapped(), map.r1_mapped(), cfg.grid.m, cfg.grid.n)?;
            emit(&cfg, None, &map_csv(&grid, &map)?)
        }
    }
}

fn solve(cfg: &RunConfig) -> Result<(), CliError> {
    let report = run_solve(cfg)?;
    eprintln!(
        "assembly {:.3} s, eigensolve {:.3} s",
        report.assembly_seconds(),
        report.solve_seconds()
    );
    let text = match cfg.output.format {
        OutputFormat::Csv => solve_csv(&report)?,
        OutputFormat::Json => solve_json(cfg, &report)?,
    };
    emit(cfg, None, &text)
}

pub fn sweep(command: Command, cfg: &RunConfig) -> Result<SweepResult, CliError> {
    let geometry = cfg.geometry()?;
    let families = cfg.solve.family.families();
    let (m, n, k) = (cfg.grid.m, cfg.grid.n, cfg.solve.num_modes);
    let options = SolveOptions::new(k);
    match command {
        Command::SweepEcc => sweep_eccentricity(&geometry, &cfg.sweep.offsets, m, n, &families, k, &options),
        Command::SweepAniso => sweep_anisotropy(&geometry, &cfg.sweep.ratios, cfg.sweep.vary, m, n, &families, k, &options),
        Command::SweepFreq => sweep_frequency(
            &geometry,
            &cfg.medium()?,
            &cfg.frequencies_hz()?,
            m,
            n,
            &cfg.tracked_modes()?,
            &options,
        ),
        _ => unreachable!("not a sweep command"),
    }
}

/// CSV: one file per family (`_TM`/`_TE` before the extension when there are
/// two). JSON: one document.
fn write_sweep(cfg: &RunConfig, result: &SweepResult) -> Result<(), CliError> {
    match cfg.output.format {
        OutputFormat::Json => emit(cfg, None, &sweep_json(cfg, result)?),
        OutputFormat::Csv => {
            let families = result.families();
            let tagged = families.len() > 1;
            for (i, family) in families.iter().enumerate() {
                let text = sweep_csv(result, *family)?;
                if cfg.output.path.is_none() && i > 0 {
                    println!();
                }
                emit(cfg, tagged.then_some(*family), &text)?;
            }
            Ok(())
        }
    }
}

/// `out.csv` becomes `out_TM.csv`.
pub fn family_path(path: &Path, family: ModeFamily) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{family}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{family}"),
    };
    path.with_file_name(name)
}

fn emit(cfg: &RunConfig, family: Option<ModeFamily>, text: &str) -> Result<(), CliError> {
    match &cfg.output.path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => {
            let path = match family {
                Some(f) => family_path(Path::new(p), f),
                None => PathBuf::from(p),
            };
            std::fs::write(&path, text)
                .map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
        }
    }
}

fn dump_matrices(cfg: &RunConfig, path: &Path) -> Result<(), CliError> {
    let geometry = cfg.geometry()?;
    let mut text = String::new();
    for family in cfg.solve.family.families() {
        text.push_str(&matrix_dump(&build_operator(&geometry, cfg.grid.m, cfg.grid.n, family)?));
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_paths() {
        assert_eq!(family_path(Path::new("dir/out.csv"), ModeFamily::Tm), PathBuf::from("dir/out_TM.csv"));
        assert_eq!(family_path(Path::new("out"), ModeFamily::Te), PathBuf::from("out_TE"));
    }

    #[test]
    fn overrides_are_validated() {
        let cfg = RunConfig::from_toml("[geometry]\nr1_mm = 5.0\nr0_mm = 0.25\nd_mm = 1.0\n").unwrap();
        let o = Overrides {
            radial_nodes: Some(12),
            modes: Some(2),
            ..Default::default()
        };
        let applied = o.apply(cfg.clone()).unwrap();
        assert_eq!((applied.grid.m, applied.solve.num_modes), (12, 2));
        let bad = Overrides {
            azimuthal_nodes: Some(3),
            ..Default::default()
        };
        assert!(matches!(bad.apply(cfg), Err(CliError::Config(_))));
    }
}
