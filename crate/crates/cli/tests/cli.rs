use std::process::{Command, Output};

use lumpgeom_core::profile::{FubiniStudyProfile, TabulatedProfile};

fn lumpgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lumpgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(out: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = out.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn fs_tabulate_has_constant_curvatures() {
    let out = lumpgeom(&["--profile", "fs", "tabulate", "--grid", "0:10:21"]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 21);
    let (e1, e3, k) = (column(&h, "Hol_e1"), column(&h, "Hol_e3"), column(&h, "kappa"));
    for r in rows {
        assert!((r[e1] - 4.0).abs() < 1e-9);
        assert!((r[e3] - 4.0).abs() < 1e-9);
        assert!((r[k] - 48.0).abs() < 1e-8);
    }
}

#[test]
fn csv_carries_metadata_header() {
    let out = lumpgeom(&["tabulate", "--grid", "1:2:2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["lumpgeom_version", "command: tabulate", "profile: l2", "quadrature_order", "seed"] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(lumpgeom(&["tabulate", "--grid", "0:1:0"]).status.code(), Some(2));
    assert_eq!(lumpgeom(&["tabulate", "--grid", "garbage"]).status.code(), Some(2));
    assert_eq!(lumpgeom(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(lumpgeom(&["--profile", "nonsense", "volume"]).status.code(), Some(2));
    assert_eq!(lumpgeom(&["--frobnicate"]).status.code(), Some(2));
}

#[test]
fn even_degree_chart_is_rejected() {
    let out = lumpgeom(&[
        "rp2",
        "--mode",
        "chart",
        "--init",
        r#"{"degree":2,"poles":[[0.5,0.1],[2.0,0.0]],"phase":0.0}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even degree"));
}

#[test]
fn odd_chart_reports_small_residual() {
    let out = lumpgeom(&[
        "rp2",
        "--mode",
        "chart",
        "--init",
        r#"{"degree":3,"poles":[[0.5,0.1],[2.0,0.3],[-0.4,0.7]],"phase":0.3}"#,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["equivariance_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn verify_characters_passes() {
    let out = lumpgeom(&["verify", "--suite", "characters,fs"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["metadata"]["command"], "verify");
}

#[test]
fn coarse_step_fails_kaehler_with_exit_1() {
    let out = lumpgeom(&["verify", "--suite", "kaehler", "--step", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn volume_writes_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vol.json");
    let out = lumpgeom(&["--out", path.to_str().unwrap(), "volume"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let vol = v["result"]["report"]["total_volume"].as_f64().unwrap();
    assert!(vol.is_finite() && vol > 0.0);
    assert_eq!(v["result"]["nodes"]["panel_order"], 32);
}

#[test]
fn rp2_f_rho_table() {
    let out = lumpgeom(&["rp2", "--mode", "f-rho", "--n", "3", "--rho-grid", "2:4"]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 3);
    let f = column(&h, "f");
    assert!(rows.windows(2).all(|w| w[1][f] > w[0][f]));
}

#[test]
fn radial_geodesic_stays_on_axis() {
    let init = r#"{"lambda":[0,0,1],"lambda_dot":[0,0,0.5]}"#;
    let out = lumpgeom(&["geodesic", "--init", init, "--T", "0.2"]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let (l1, l2) = (column(&h, "lambda1"), column(&h, "lambda2"));
    assert!(rows.iter().all(|r| r[l1].abs() < 1e-12 && r[l2].abs() < 1e-12));
}

#[test]
fn hamiltonian_keeps_lambda() {
    let init = r#"{"lambda":[0.6,0,0.8]}"#;
    let out = lumpgeom(&["hamiltonian", "--init", init, "--T", "2", "--samples", "10"]);
    assert!(out.status.success());
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let (a, b, c) = (column(&h, "lambda1"), column(&h, "lambda2"), column(&h, "lambda3"));
    for r in rows {
        assert!(((r[a].powi(2) + r[b].powi(2) + r[c].powi(2)).sqrt() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "kaehler", "--seed", "7"];
    assert_eq!(lumpgeom(&args).stdout, lumpgeom(&args).stdout);
    let args = ["tabulate", "--grid", "0.1:5:7"];
    assert_eq!(lumpgeom(&args).stdout, lumpgeom(&args).stdout);
}

#[test]
fn tabulated_profile_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let grid: Vec<f64> = (0..=400).map(|i| 0.025 * i as f64).collect();
    let sampled = TabulatedProfile::sample(&FubiniStudyProfile, &grid).unwrap();
    let mut csv = Vec::new();
    sampled.write_csv(&mut csv).unwrap();
    std::fs::write(&path, csv).unwrap();
    let profile = format!("csv:{}", path.display());
    let out = lumpgeom(&["--profile", &profile, "tabulate", "--grid", "0.5:2:4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let (l, a, k) = (column(&h, "lambda"), column(&h, "A"), column(&h, "kappa"));
    for r in rows {
        assert!((r[a] - lumpgeom_core::profile::a_fs(r[l])).abs() < 1e-10);
        // curvature uses higher derivatives than the C² interpolant matches
        assert!((r[k] - 48.0).abs() < 0.5, "kappa {}", r[k]);
    }
}
