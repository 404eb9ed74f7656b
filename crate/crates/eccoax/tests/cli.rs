use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const CONCENTRIC: &str = "[geometry]\nr1_mm = 5.0\nr0_mm = 0.25\nd_mm = 0.0\n[grid]\nM = 20\nN = 81\n[solve]\nnum_modes = 3\n";
const FIG5: &str = "[geometry]\nr1_mm = 10.0\nr0_mm = 2.0\nd_mm = 3.0\n\
    [media]\neps_rs = 5.6\neps_rz = 4.6\nsigma_s = 0.38\nsigma_z = 0.34\n\
    [grid]\nM = 12\nN = 49\n\
    [frequency]\nf_start_ghz = 1.0\nf_stop_ghz = 10.0\nf_points = 10\n";

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn eccoax(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eccoax"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_the_mode_table() {
    let dir = TempDir::new().unwrap();
    let out = eccoax(&["solve"], &write_config(&dir, CONCENTRIC));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "label,lambda_per_m2,Re_krho_rad_per_m,Im_krho_rad_per_m,Re_kz_rad_per_m,Im_kz_rad_per_m,residual_per_m2"
    );
    assert_eq!(lines.len(), 4);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "TM01");
    let k: f64 = first[2].parse().unwrap();
    assert!((k - 612.881_460_653_410_6).abs() / 612.88 < 0.005);
    assert_eq!(first[4], "nan");
    // Twelve significant digits.
    assert_eq!(first[1].split('e').next().unwrap().trim_start_matches('-').len(), 13);
    assert!(String::from_utf8_lossy(&out.stderr).contains("eigensolve"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "[geometry]\nr1_mm = 5.0\nr0_mm = 2.0\nd_mm = 3.0\n");
    let out = eccoax(&["solve"], &bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d_mm + r0_mm < r1_mm"));

    let unknown = write_config(&dir, &format!("{CONCENTRIC}[extra]\nkey = 1\n"));
    assert_eq!(eccoax(&["solve"], &unknown).status.code(), Some(1));
    assert_eq!(eccoax(&["solve"], &dir.path().join("missing.toml")).status.code(), Some(1));
    let usage = Command::new(env!("CARGO_BIN_EXE_eccoax")).arg("solve").arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn solver_failures_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, CONCENTRIC);
    // A 3 × 5 TM grid has only four unknowns.
    let out = eccoax(&["solve", "-M", "3", "-N", "5", "--modes", "10"], &cfg);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_round_trips_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, FIG5);
    for (cmd, extra) in [("solve", vec!["--modes", "2"]), ("sweep-freq", vec![])] {
        let target = dir.path().join(format!("{cmd}.json"));
        let mut args = vec![cmd, "--format", "json", "--output", target.to_str().unwrap()];
        args.extend(extra);
        let cfg = if cmd == "solve" {
            write_config(&dir, &FIG5.replace("f_start_ghz = 1.0\nf_stop_ghz = 10.0\nf_points = 10", "f_ghz = 5.0"))
        } else {
            cfg.clone()
        };
        let out = eccoax(&args, &cfg);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&target).unwrap();
        let value: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["config", "provenance", "results"]);
        assert_eq!(eccoax::output::canonical_json(&value), text);
    }
}

#[test]
fn frequency_sweep_csv_columns() {
    let dir = TempDir::new().unwrap();
    let out = eccoax(&["sweep-freq"], &write_config(&dir, FIG5));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "f_ghz,Re_kz_TM01_rad_per_m,Im_kz_TM01_rad_per_m,Re_kz_TM11e_rad_per_m,Im_kz_TM11e_rad_per_m"
    );
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[2] > 0.0 && r[4] > 0.0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 eigensolves"));
}

#[test]
fn eccentricity_sweep_writes_one_file_per_family() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "[geometry]\nr1_mm = 5.0\nr0_mm = 0.25\nd_mm = 0.0\n[solve]\nfamily = \"both\"\nnum_modes = 3\n[sweep]\noffsets = [0.05, 0.1]\n",
    );
    let target = dir.path().join("fig2.csv");
    let out = eccoax(&["sweep-ecc", "--output", target.to_str().unwrap()], &cfg);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for family in ["TM", "TE"] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig2_{family}.csv"))).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("d_over_r1,krho_"), "{header}");
        assert_eq!(header.split(',').count(), 4);
        assert!(header.split(',').skip(1).all(|c| c.contains(family) && c.ends_with("_rad_per_m")));
        assert_eq!(text.lines().count(), 3);
    }
}

#[test]
fn single_ratio_anisotropy_sweep_matches_solve() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, &format!("{CONCENTRIC}[sweep]\nratios = [1.0]\n"));
    let sweep = stdout(&eccoax(&["sweep-aniso"], &cfg));
    let solve = stdout(&eccoax(&["solve"], &cfg));
    let sweep_row: Vec<String> = sweep.lines().nth(1).unwrap().split(',').map(String::from).collect();
    let solve_k: Vec<String> = solve.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().to_string()).collect();
    assert_eq!(sweep_row[0], "1.00000000000e0");
    assert_eq!(&sweep_row[1..], &solve_k[..]);
}

#[test]
fn validate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, &CONCENTRIC.replace("d_mm = 0.0", "d_mm = 1.0"));
    let a = eccoax(&["validate"], &cfg);
    let b = eccoax(&["validate"], &cfg);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("PASS jacobian"));
    assert!(text.contains("PASS convergence_order"));
    assert!(text.ends_with("0 failed\n"));
}

#[test]
fn emit_map_and_matrix_dump() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, &CONCENTRIC.replace("d_mm = 0.0", "d_mm = 1.0"));
    let dump = dir.path().join("ab.txt");
    let out = eccoax(&["emit-map", "-M", "5", "-N", "9", "--dump-matrices", dump.to_str().unwrap()], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "i,j,rho_m,phi_rad,rho_tilde_m,phi_tilde_rad,jacobian_inv");
    assert_eq!(lines.len(), 1 + 5 * 9);
    // The inner node on the axis lands on the near side of the inner conductor.
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[4] - 0.75e-3).abs() < 1e-12);

    let dump = std::fs::read_to_string(dump).unwrap();
    let headers: Vec<&str> = dump.lines().filter(|l| l.starts_with('#')).collect();
    // Rings 1 and 3 border a conductor: 4 + 5 + 4 entries per angle.
    assert_eq!(headers, ["# A TM 24 24 104", "# B TM 24 24 24"]);
    let entries = dump.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(entries, 104 + 24);
}
