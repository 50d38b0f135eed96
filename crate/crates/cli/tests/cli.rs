//! End-to-end checks of the command-line surface: exit codes, config
//! precedence, artifact layout, and CSV/PGM consistency.

use std::path::Path;
use std::process::{Command, Output};

fn pairwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn invalid_sites_exits_2_naming_the_key() {
    let out = pairwalk(&["walk", "--sites", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sites"), "stderr was: {stderr}");
    // machine-readable error payload
    let err: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(err["error"]["exit_code"], 2);
}

#[test]
fn unknown_flag_exits_2() {
    let out = pairwalk(&["walk", "--sights", "29"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sights"));
}

#[test]
fn unknown_config_key_exits_2_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "sites = 9\nbogus = 3\n").unwrap();
    let out = pairwalk(&["walk", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn repeated_flag_warns_and_last_wins() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "walk",
        "--sites", "9",
        "--T", "0.5",
        "--U", "8",
        "--U", "-8",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--U given 2 times"));
    let cfg = read_json(&out_dir.join("config.json"));
    assert_eq!(cfg["interaction"], -8.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_file = dir.path().join("run.cfg");
    std::fs::write(&cfg_file, "# lattice\nsites = 9\nU = 3\nT = 0.5\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "walk",
        "--config", cfg_file.to_str().unwrap(),
        "--U", "5",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cfg = read_json(&out_dir.join("config.json"));
    assert_eq!(cfg["sites"], 9);
    assert_eq!(cfg["interaction"], 5.0);
}

#[test]
fn walk_emits_consistent_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "walk",
        "--sites", "29",
        "--U", "0",
        "--T", "4",
        "--initial", "adjacent@14",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    for name in [
        "config.json",
        "results.json",
        "density.csv",
        "correlation.csv",
        "correlation.pgm",
        "correlation_fluctuation.csv",
        "correlation_fluctuation.pgm",
    ] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }

    let results = read_json(&out_dir.join("results.json"));
    let residual = results["diagnostics"]["correlation_sum_residual"].as_f64().unwrap();
    assert!(residual < 1e-10, "sum-rule residual {residual}");

    // the image must be the quantized version of the CSV, using the
    // normalization recorded in the summary
    let (min, max) = results["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["file"] == "correlation.pgm")
        .map(|o| (o["min"].as_f64().unwrap(), o["max"].as_f64().unwrap()))
        .unwrap();

    let csv = std::fs::read_to_string(out_dir.join("correlation.csv")).unwrap();
    let mut values = Vec::new();
    for line in csv.lines().skip(1) {
        for cell in line.split(',').skip(1) {
            values.push(cell.parse::<f64>().unwrap());
        }
    }

    let pgm = std::fs::read(out_dir.join("correlation.pgm")).unwrap();
    let header_end = pgm
        .windows(4)
        .position(|w| w == b"255\n")
        .map(|p| p + 4)
        .unwrap();
    let header = std::str::from_utf8(&pgm[..header_end]).unwrap();
    assert!(header.starts_with("P5\n29 29\n"), "header: {header}");
    let pixels = &pgm[header_end..];
    assert_eq!(pixels.len(), 29 * 29);
    for (v, p) in values.iter().zip(pixels) {
        let want = if max <= min {
            0
        } else {
            (255.0 * (v - min) / (max - min)).round().clamp(0.0, 255.0) as u8
        };
        assert_eq!(*p, want);
    }
}

#[test]
fn spectrum_counts_surface_in_json() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "spectrum",
        "--sites", "29",
        "--U", "8",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let results = read_json(&out_dir.join("results.json"));
    assert_eq!(results["diagnostics"]["bound_count"], 29);
    assert_eq!(results["diagnostics"]["scattering_count"], 406);
    let csv = std::fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 29 * 30 / 2);
}

#[test]
fn numerical_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    // a step far too coarse for the nonlinearity trips the conservation gate
    let out = pairwalk(&[
        "classical",
        "--sites", "15",
        "--gamma", "3",
        "--T", "4",
        "--dt", "0.5",
        "--realizations", "10",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let err: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(err["error"]["exit_code"], 4);
}

#[test]
fn reference_fermion_diagonal_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "reference",
        "--model", "fermion",
        "--sites", "15",
        "--T", "2",
        "--initial", "adjacent@7",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(out_dir.join("correlation.csv")).unwrap();
    for (q, line) in csv.lines().skip(1).enumerate() {
        let diag: f64 = line.split(',').nth(q + 1).unwrap().parse().unwrap();
        assert_eq!(diag, 0.0);
    }
}

#[test]
fn figure_preset_fills_the_panel_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "walk",
        "--figure", "fig2k",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let cfg = read_json(&out_dir.join("config.json"));
    assert_eq!(cfg["sites"], 29);
    assert_eq!(cfg["interaction"], 20.0);
    assert_eq!(cfg["initial"], "adjacent@14");
    let results = read_json(&out_dir.join("results.json"));
    let ratio = results["diagnostics"]["bunching_ratio"].as_f64().unwrap();
    assert!(ratio < 1.0, "strong-interaction panel should anti-bunch, ratio {ratio}");
}

#[test]
fn compare_runs_a_tiny_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = pairwalk(&[
        "compare",
        "--sites", "15",
        "--T", "1",
        "--U-sweep", "0,2",
        "--realizations", "50",
        "--dt", "0.002",
        "--seed", "3",
        "--output", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("distances.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let results = read_json(&out_dir.join("results.json"));
    assert!(results["diagnostics"]["distances"].as_array().unwrap().len() == 2);
}
