use std::process::{Command, Output};

use hydrolens::gaussian_ppt::MAP_CSV_HEADER;

fn hydrolens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydrolens"))
        .args(args)
        .env_remove("HYDROLENS_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn field(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|line| line.strip_prefix(key))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

#[test]
fn schmidt_ground_and_first_excited() {
    let out = hydrolens(&["schmidt", "--n", "1", "--a0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r1 = stdout(&out);
    assert!((field(&r1, "delta_k") - 0.063494).abs() < 1e-6);
    assert!(r1.contains("entangled (Δk̄ > 0)"));
    let r2 = stdout(&hydrolens(&["schmidt", "--n", "2", "--a0", "1"]));
    assert!((field(&r2, "delta_k") - 0.063494 / 2.0).abs() < 1e-6);
}

#[test]
fn schmidt_from_coupling() {
    // a0 = hbar²/(mu alpha) = 4
    let out = hydrolens(&["schmidt", "--n", "1", "--alpha", "0.5", "--mu", "2", "--hbar", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout(&out);
    assert!((field(&r, "a0") - 4.0).abs() < 1e-12);
    assert!((field(&r, "delta_p") - 2.0 * 0.0634936 / 4.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["schmidt", "--a0", "1"][..],
        &["schmidt", "--n", "1"],
        &["ppt", "--n", "1", "--l", "1", "--m", "0", "--ratio", "1"],
        &["ppt", "--n", "2", "--l", "1", "--m", "-2", "--ratio", "1"],
        &["ppt", "--n", "1"],
        &["ppt", "--ratio", "-1"],
        &["ppt", "--b", "1"],
        &["map", "--a0-points", "1"],
        &["map", "--b-min", "2", "--b-max", "1"],
        &["linent", "--n", "1", "--volume", "0"],
        &["verify", "--n-max", "0"],
        &["frobnicate"],
    ] {
        let out = hydrolens(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn ppt_detected_exits_0() {
    let out = hydrolens(&["ppt", "--n", "1", "--l", "0", "--m", "0", "--ratio", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout(&out);
    assert!((field(&r, "min") - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    assert!(r.contains("detected   yes"));
}

#[test]
fn ppt_inside_blind_band_exits_3() {
    let out = hydrolens(&["ppt", "--ratio", "1.4832"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("detected   no"));
}

#[test]
fn ppt_from_lengths_matches_ratio() {
    let by_ratio = stdout(&hydrolens(&[
        "ppt", "--n", "2", "--l", "1", "--m", "1", "--ratio", "0.5",
    ]));
    let by_length = stdout(&hydrolens(&[
        "ppt", "--n", "2", "--l", "1", "--m", "1", "--a0", "3", "--b", "6",
    ]));
    assert_eq!(by_ratio, by_length);
}

#[test]
fn map_two_by_two_all_detected() {
    let out = hydrolens(&[
        "map",
        "--a0-min",
        "1",
        "--a0-max",
        "2",
        "--a0-points",
        "2",
        "--b-min",
        "1",
        "--b-max",
        "1",
        "--b-points",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], MAP_CSV_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.ends_with(",1")));
    assert!(!csv.contains('\r'));
}

#[test]
fn map_blind_band_rows() {
    let csv = stdout(&hydrolens(&["map"]));
    let mut blind_at_1_5 = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let ratio = cols[0].parse::<f64>().unwrap() / cols[1].parse::<f64>().unwrap();
        if (ratio - 1.5).abs() < 1e-12 {
            assert_eq!(cols[7], "0", "{line}");
            blind_at_1_5 += 1;
        }
    }
    assert!(blind_at_1_5 > 0);
}

#[test]
fn map_values_round_trip() {
    let csv = stdout(&hydrolens(&["map", "--a0-points", "3", "--b-points", "3"]));
    for line in csv.lines().skip(1) {
        for v in line.split(',').take(7) {
            let x: f64 = v.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), v);
        }
    }
}

#[test]
fn map_json_mirrors_csv() {
    let args = ["map", "--n", "2", "--l", "1", "--a0-points", "3", "--b-points", "4"];
    let csv = stdout(&hydrolens(&args));
    let json_out = hydrolens(&[&args[..], &["--format", "json"]].concat());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&json_out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), lines.len());
    let keys: Vec<&str> = MAP_CSV_HEADER.split(',').collect();
    for (row, line) in rows.iter().zip(lines) {
        for (key, v) in keys.iter().zip(line.split(',')) {
            assert_eq!(row[*key].as_f64().unwrap(), v.parse::<f64>().unwrap(), "{key}");
        }
    }
}

#[test]
fn map_writes_file_and_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.csv");
    let out = hydrolens(&[
        "map",
        "--a0-points",
        "2",
        "--b-points",
        "2",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().starts_with(MAP_CSV_HEADER));

    let missing = dir.path().join("no/such/dir/map.csv");
    let out = hydrolens(&["map", "-o", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bad_thread_setting_is_usage_error() {
    for bad in ["0", "-3", "many"] {
        let out = Command::new(env!("CARGO_BIN_EXE_hydrolens"))
            .arg("map")
            .env("HYDROLENS_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn linent_ground_state() {
    let out = hydrolens(&["linent", "--n", "1", "--l", "0", "--m", "0", "--a0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout(&out);
    let want = 33.0 / (16.0 * std::f64::consts::PI.powi(2));
    assert!((field(&r, "product") - want).abs() < 1e-6);
    assert!(r.contains("→ 1 (V → ∞)"));

    let r = stdout(&hydrolens(&["linent", "--n", "1", "--a0", "1", "--volume", "10"]));
    assert!((field(&r, "S_Lin") - (1.0 - want / 10.0)).abs() < 1e-6);
}

#[test]
fn verify_restricted_sweep_passes() {
    let out = hydrolens(&["verify", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let r = stdout(&out);
    assert!(r.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!r.contains("FAIL"));
}

#[test]
fn verify_injected_fault_exits_5() {
    let out = hydrolens(&["verify", "--n-max", "2", "--inject-fault", "1e-6"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn moments_report() {
    let out = hydrolens(&["moments", "--n", "2", "--l", "1", "--m", "1", "--ratio", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    // <r²> = 30 split 12 + 12 + 6 for m = ±1
    assert!(stdout(&out).contains("12.0000 12.0000 6.00000"));
}
