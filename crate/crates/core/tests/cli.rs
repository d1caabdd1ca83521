use std::process::{Command, Output};

fn hzmean(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hzmean"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n);
    }
    cmd.output().expect("spawn hzmean")
}

const SWEEP: &[&str] = &["sweep", "--estimator", "cor3", "--t", "200,400,800", "--x", "1,2,4"];

#[test]
fn sweep_csv_is_byte_identical_across_thread_counts() {
    let one = hzmean(SWEEP, Some("1"));
    let four = hzmean(SWEEP, Some("4"));
    let again = hzmean(SWEEP, Some("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sigma,t,x,y,dist_y,in_A,oracle,estimate,residual,predicted_scale,terms_used,error_flag"
    );
    assert_eq!(lines.count(), 9);
}

#[test]
fn residual_column_recomputes_from_row() {
    let out = hzmean(SWEEP, None);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let oracle: f64 = f[6].parse().unwrap();
        let estimate: f64 = f[7].parse().unwrap();
        let residual: f64 = f[8].parse().unwrap();
        assert_eq!((oracle - estimate).abs(), residual, "{line}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("hzmean-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.conf");
    std::fs::write(&cfg, "# cor3 grid\nestimator = cor3\nt = 200, 400, 800\nx = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_config = String::from_utf8(hzmean(&["sweep", "--config", cfg], None).stdout).unwrap();
    assert_eq!(from_config.lines().count(), 4);
    assert!(from_config.lines().skip(1).all(|l| l.split(',').nth(2) == Some("1")));

    let overridden = String::from_utf8(hzmean(&["sweep", "--config", cfg, "--x", "2"], None).stdout).unwrap();
    assert!(overridden.lines().skip(1).all(|l| l.split(',').nth(2) == Some("2")));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_cell_list_is_header_only() {
    let out = hzmean(&["sweep", "--estimator", "cor3", "--t", "200,400,800", "--x-rule", ""], None);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn failed_points_keep_their_rows() {
    // cor3 at sigma != 1/2 is a domain error per row, not for the sweep
    let out = hzmean(&["sweep", "--estimator", "cor3", "--sigma", "0.4", "--t", "200,400", "--x", "1"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.ends_with(",domain") && r.contains("NaN")));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = hzmean(&["verify", "--suite", "everything"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lattice_suite_passes_and_reports_json() {
    let out = hzmean(&["verify", "--suite", "lattice"], None);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn density_example_set() {
    let out = hzmean(&["density", "--t", "62.83185307179586", "--eta", "0.25", "--members"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",1 2 5 9 10"), "{text}");
}

#[test]
fn json_format_for_tables() {
    let out = hzmean(&["hyperbola", "--n", "10", "--sigma", "0.5", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let split = v[0]["split"].as_f64().unwrap();
    assert!((split - 15.0456349206349).abs() < 1e-9);
}
