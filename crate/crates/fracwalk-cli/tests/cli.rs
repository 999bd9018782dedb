//! End-to-end tests of the binary: output formats, determinism, the
//! manifest/replay contract and the exit-code contract.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracwalk"))
}

fn stdout_of(args: &[&str]) -> (String, i32) {
    let out = bin().args(args).output().expect("spawn fracwalk");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn ml_eval_exponential_value() {
    let (out, code) = stdout_of(&["ml-eval", "--alpha", "1", "--z", "-1"]);
    assert_eq!(code, 0);
    let line = out.lines().nth(1).unwrap();
    let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((value - (-1.0f64).exp()).abs() < 1e-15);
    assert!(line.ends_with("series"));
}

#[test]
fn ml_eval_survival_at_zero_is_one() {
    let (out, code) = stdout_of(&["ml-eval", "--survival", "--beta", "0.5", "--t", "0"]);
    assert_eq!(code, 0);
    let value: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(value, 1.0);
}

#[test]
fn ml_eval_mwright_closed_form() {
    let (out, _) = stdout_of(&["ml-eval", "--mwright", "--beta", "0.5", "--z", "1"]);
    let value: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let expect = (-0.25f64).exp() / std::f64::consts::PI.sqrt();
    assert!((value - expect).abs() < 1e-12);
}

#[test]
fn domain_error_exits_2() {
    let out = bin()
        .args(["ml-eval", "--alpha", "-1", "--z", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let out = bin().args(["ml-eval", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_is_deterministic_per_seed() {
    let a = stdout_of(&["sample", "--law", "pareto", "--beta", "0.5", "--count", "20", "--seed", "9"]);
    let b = stdout_of(&["sample", "--law", "pareto", "--beta", "0.5", "--count", "20", "--seed", "9"]);
    let c = stdout_of(&["sample", "--law", "pareto", "--beta", "0.5", "--count", "20", "--seed", "10"]);
    assert_eq!(a.0, b.0);
    assert_ne!(a.0, c.0);
    assert_eq!(a.0.lines().count(), 20);
}

#[test]
fn json_mode_emits_objects() {
    let (out, code) = stdout_of(&[
        "ml-eval", "--alpha", "0.5", "--z", "-1,-2", "--json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("value").unwrap().as_f64().is_some());
        assert!(v.get("method").is_some());
    }
}

#[test]
fn validate_single_check_and_exit_codes() {
    let out = bin()
        .args(["validate", "--only", "respeed-invariance", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("PASS respeed-invariance"));
    // unknown check name is a usage error
    let out = bin()
        .args(["validate", "--only", "nonexistent"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_are_byte_identical_per_seed() {
    let a = bin()
        .args(["validate", "--only", "thinning-universality", "--seed", "7"])
        .output()
        .unwrap();
    let b = bin()
        .args(["validate", "--only", "thinning-universality", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_list_names_all_checks() {
    let (out, code) = stdout_of(&["validate", "--list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 13);
    assert!(out.contains("route-triangle (criterion 11)"));
}

#[test]
fn manifest_replay_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("draws.csv");
    let status = bin()
        .args([
            "sample", "--law", "sym-stable", "--alpha", "1.5", "--count", "100",
            "--seed", "11", "--csv", "--out",
        ])
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let manifest_path = dir.path().join("draws.csv.manifest.json");
    assert!(manifest_path.exists());
    let replay = bin().arg("replay").arg(&manifest_path).output().unwrap();
    assert_eq!(replay.status.code(), Some(0), "{replay:?}");
    assert!(String::from_utf8_lossy(&replay.stdout).contains("MATCH"));
}

#[test]
fn config_file_supplies_seed_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fracwalk.conf");
    std::fs::write(&cfg, "seed=9\nthreads=1\n").unwrap();
    let via_config = bin()
        .args(["sample", "--law", "two-point", "--count", "5", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    let via_flag = stdout_of(&["sample", "--law", "two-point", "--count", "5", "--seed", "9"]);
    assert_eq!(String::from_utf8_lossy(&via_config.stdout), via_flag.0);
    // explicit flag wins over the file value
    let overridden = bin()
        .args([
            "sample", "--law", "two-point", "--count", "5", "--seed", "1", "--config",
        ])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_ne!(via_config.stdout, overridden.stdout);
}

#[test]
fn density_routes_agree_through_cli() {
    let (fourier, _) = stdout_of(&[
        "density", "--alpha", "2", "--beta", "0.5", "--t", "1", "--x-max", "2",
        "--n-points", "5", "--route", "fourier",
    ]);
    let (subord, _) = stdout_of(&[
        "density", "--alpha", "2", "--beta", "0.5", "--t", "1", "--x-max", "2",
        "--n-points", "5", "--route", "subordination",
    ]);
    let parse = |text: &str| -> Vec<(f64, f64)> {
        text.lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                (
                    it.next().unwrap().parse().unwrap(),
                    it.next().unwrap().parse().unwrap(),
                )
            })
            .collect()
    };
    for ((x1, u1), (x2, u2)) in parse(&fourier).iter().zip(parse(&subord).iter()) {
        assert_eq!(x1, x2);
        assert!((u1 - u2).abs() < 1e-4, "x={x1}: {u1} vs {u2}");
    }
}

#[test]
fn renewal_pmf_table_contains_survival_row() {
    let (out, code) = stdout_of(&[
        "renewal-sim", "--law", "mittag-leffler", "--beta", "0.5", "--horizon", "1",
        "--paths", "2000", "--seed", "5", "--pmf-at", "1", "--k-max", "16",
    ]);
    assert_eq!(code, 0);
    let first = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = first.split(',').collect();
    assert_eq!(cols[0], "0");
    let p_inv: f64 = cols[2].parse().unwrap();
    // k = 0 row of the inversion column is the survival probability
    assert!((p_inv - 0.427583576155807).abs() < 1e-9);
    let p_emp: f64 = cols[1].parse().unwrap();
    assert!((p_emp - p_inv).abs() < 0.05);
}

#[test]
fn ctrw_charfn_table_shape() {
    let (out, code) = stdout_of(&[
        "ctrw-sim", "--waiting", "mittag-leffler", "--beta", "0.5", "--jump", "gaussian",
        "--sigma", "1.4142135623730951", "--well-scaled", "--h", "0.1", "--paths", "2000",
        "--times", "1", "--charfn", "--kappas", "0,1", "--seed", "2",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    // kappa = 0 estimate is exactly 1 with zero stderr
    let cols: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(cols[2], "1");
    assert_eq!(cols[3], "0");
}

#[test]
fn variance_scan_matches_law() {
    let (out, code) = stdout_of(&[
        "variance-scan", "--beta", "0.5", "--times", "1", "--paths", "20000", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    let cols: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let analytic: f64 = cols[1].parse().unwrap();
    let empirical: f64 = cols[2].parse().unwrap();
    let se: f64 = cols[3].parse().unwrap();
    assert!((analytic - 2.0 / 0.8862269254527580_f64.recip().recip()).abs() < 1e-12);
    assert!((empirical - analytic).abs() < 4.0 * se);
}

#[test]
fn subordinate_cloud_is_monotone_in_time() {
    let (out, code) = stdout_of(&[
        "subordinate", "--alpha", "1.5", "--beta", "0.75", "--dt-star", "0.01",
        "--n-steps", "50", "--paths", "2", "--seed", "4",
    ]);
    assert_eq!(code, 0);
    let mut prev_t = -1.0;
    let mut prev_path = String::new();
    for line in out.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[0] != prev_path {
            prev_path = cols[0].to_string();
            prev_t = -1.0;
        }
        let t: f64 = cols[2].parse().unwrap();
        assert!(t >= prev_t);
        prev_t = t;
    }
}
