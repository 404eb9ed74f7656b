//! CSV, JSON and plain-text writers.
//!
//! CSV: comma separated, `\n` line ends, numbers in exponent form with twelve
//! significant digits, units in every header cell. JSON: one object with
//! `config`, `provenance` and `results`, keys sorted, shortest round-trip floats,
//! so that parsing and re-serializing reproduces the same bytes.

use eccoax_core::{ConcentricMap, DiscreteOperator, ModeFamily, PolarGrid};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::solve::SolveReport;
use crate::sweeps::{Quantity, SweepResult};

pub const SOLVE_HEADER: [&str; 7] = [
    "label",
    "lambda_per_m2",
    "Re_krho_rad_per_m",
    "Im_krho_rad_per_m",
    "Re_kz_rad_per_m",
    "Im_kz_rad_per_m",
    "residual_per_m2",
];

pub const MAP_HEADER: [&str; 7] = ["i", "j", "rho_m", "phi_rad", "rho_tilde_m", "phi_tilde_rad", "jacobian_inv"];

/// Twelve significant digits, locale independent.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.11e}")
    }
}

fn write_csv<I, R>(header: &[String], records: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in records {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn solve_csv(report: &SolveReport) -> Result<String, CliError> {
    let header: Vec<String> = SOLVE_HEADER.iter().map(|s| s.to_string()).collect();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    write_csv(
        &header,
        report.rows.iter().map(|r| {
            let kz = r.k_z.unwrap_or(nan);
            vec![
                r.label.name(),
                number(r.lambda),
                number(r.k_rho.re),
                number(r.k_rho.im),
                number(kz.re),
                number(kz.im),
                number(r.residual),
            ]
        }),
    )
}

/// Header cells of one sweep row: lossless `k_ρ` rows are real and take one
/// column, complex rows take a real and an imaginary column.
fn sweep_columns(quantity: Quantity, label: &str) -> Vec<String> {
    match quantity {
        Quantity::Krho => vec![format!("krho_{label}_rad_per_m")],
        Quantity::Kz => vec![format!("Re_kz_{label}_rad_per_m"), format!("Im_kz_{label}_rad_per_m")],
    }
}

/// The rows of one family as a CSV table with the sweep axis first.
pub fn sweep_csv(result: &SweepResult, family: ModeFamily) -> Result<String, CliError> {
    let rows: Vec<_> = result.rows.iter().filter(|r| r.label.family == family).collect();
    let mut header = vec![result.axis_name.clone()];
    for r in &rows {
        header.extend(sweep_columns(r.quantity, &r.label.name()));
    }
    write_csv(
        &header,
        result.axis.iter().enumerate().map(|(p, &x)| {
            let mut rec = vec![number(x)];
            for r in &rows {
                let v = r.values[p];
                match r.quantity {
                    Quantity::Krho => rec.push(number(v.re)),
                    Quantity::Kz => rec.extend([number(v.re), number(v.im)]),
                }
            }
            rec
        }),
    )
}

/// Node coordinates in both domains with the Jacobian weight.
pub fn map_csv(grid: &PolarGrid, map: &ConcentricMap) -> Result<String, CliError> {
    let header: Vec<String> = MAP_HEADER.iter().map(|s| s.to_string()).collect();
    let mut records = Vec::with_capacity(grid.radial_nodes() * grid.azimuthal_nodes());
    for i in 0..grid.radial_nodes() {
        for j in 0..grid.azimuthal_nodes() {
            let (rho, phi) = (grid.rho(i), grid.phi(j));
            let (rt, pt) = map.map_to_eccentric(rho, phi)?;
            records.push(vec![
                i.to_string(),
                j.to_string(),
                number(rho),
                number(phi),
                number(rt),
                number(pt),
                number(map.jacobian_inv(rho, phi)?),
            ]);
        }
    }
    write_csv(&header, records)
}

/// Zero-based coordinate triples of `A` followed by the diagonal of `B`.
pub fn matrix_dump(op: &DiscreteOperator) -> String {
    use std::fmt::Write;
    let a = op.a();
    let mut s = String::new();
    let _ = writeln!(s, "# A {} {} {} {}", op.family(), a.nrows(), a.ncols(), a.nnz());
    for (i, j, v) in a.triplets() {
        let _ = writeln!(s, "{i} {j} {v:.16e}");
    }
    let b = op.b_diagonal();
    let _ = writeln!(s, "# B {} {} {} {}", op.family(), b.len(), b.len(), b.len());
    for (i, v) in b.iter().enumerate() {
        let _ = writeln!(s, "{i} {i} {v:.16e}");
    }
    s
}

fn complex(v: Complex64) -> Value {
    json!([v.re, v.im])
}

fn document(config: &RunConfig, provenance: Value, results: Value) -> Result<String, CliError> {
    let doc = json!({
        "config": serde_json::to_value(config).map_err(|e| CliError::Config(e.to_string()))?,
        "provenance": provenance,
        "results": results,
    });
    Ok(canonical_json(&doc))
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn solve_json(config: &RunConfig, report: &SolveReport) -> Result<String, CliError> {
    let modes: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "label": r.label.name(),
                "family": r.label.family.as_str(),
                "m": r.label.m,
                "n": r.label.n,
                "ambiguous": r.ambiguous,
                "lambda_per_m2": r.lambda,
                "krho_rad_per_m": complex(r.k_rho),
                "kz_rad_per_m": r.k_z.map(complex),
                "residual_per_m2": r.residual,
            })
        })
        .collect();
    let first = report.solutions.first();
    let provenance = json!({
        "eigensolves": report.solutions.len(),
        "frequency_hz": report.frequency_hz,
        "radial_nodes": first.map(|s| s.operator.grid().radial_nodes()),
        "azimuthal_nodes": first.map(|s| s.operator.grid().azimuthal_nodes()),
        "unknowns": report.solutions.iter().map(|s| json!({
            "family": s.family.as_str(),
            "count": s.operator.total_unknowns(),
        })).collect::<Vec<_>>(),
        "assembly_s": report.assembly_seconds(),
        "solve_s": report.solve_seconds(),
    });
    document(config, provenance, json!({ "modes": modes }))
}

pub fn sweep_json(config: &RunConfig, result: &SweepResult) -> Result<String, CliError> {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|r| {
            json!({
                "label": r.label.name(),
                "family": r.label.family.as_str(),
                "quantity": r.quantity,
                "unit": "rad_per_m",
                "re": r.values.iter().map(|v| v.re).collect::<Vec<_>>(),
                "im": r.values.iter().map(|v| v.im).collect::<Vec<_>>(),
            })
        })
        .collect();
    let provenance = serde_json::to_value(&result.provenance).map_err(|e| CliError::Config(e.to_string()))?;
    let results = json!({
        "kind": result.kind,
        "axis_name": result.axis_name,
        "axis": result.axis,
        "rows": rows,
    });
    document(config, provenance, results)
}
