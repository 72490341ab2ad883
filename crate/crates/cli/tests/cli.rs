use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fclt(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fclt"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/example.toml")
}

#[test]
fn simulate_writes_a_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--model", "rademacher", "--n", "1024", "--m", "500", "--seed", "7"];
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    assert!(fclt(&args, &first).status.success());
    assert!(fclt(&args, &second).status.success());
    let csv = std::fs::read_to_string(first.join("values.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("nu,re,im"));
    assert_eq!(lines.count(), 500);
    assert_eq!(csv, std::fs::read_to_string(second.join("values.csv")).unwrap());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(first.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"][0], "values.csv");
    assert_eq!(manifest["started_unix"], 1700000000);
}

#[test]
fn student_with_three_dof_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = fclt(
        &["simulate", "--model", "student", "--dof", "3", "--n", "8", "--m", "4", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("infinite third absolute moment"));
}

#[test]
fn quarter_frequency_has_exact_covariance() {
    let dir = tempfile::tempdir().unwrap();
    let o = fclt(&["covariance", "--nus", "0.25", "--n-schedule", "4"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("covariance.json")).unwrap()).unwrap();
    assert_eq!(json[0]["deviation"].as_f64(), Some(0.0));
}

#[test]
fn equal_moduli_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = fclt(&["covariance", "--nus", "0.1,0.1", "--n-schedule", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|ν_1| = |ν_2|"), "{}", stderr(&o));
}

fn deviations(dir: &Path, schedule: &str) -> Vec<f64> {
    let o = fclt(&["covariance", "--nus", "0.13,0.31", "--n-schedule", schedule, "--plot"], dir);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("covariance.json")).unwrap()).unwrap();
    json.as_array().unwrap().iter().map(|r| r["deviation"].as_f64().unwrap()).collect()
}

#[test]
fn covariance_deviation_vanishes_at_least_like_one_over_n() {
    let dir = tempfile::tempdir().unwrap();
    // Every phase combination of (0.13, 0.31) is a multiple of 1/100, so
    // multiples of 100 are exact periods and the deviation is rounding only.
    for d in deviations(dir.path(), "100,1000,10000") {
        assert!(d <= 1e-12, "{d}");
    }
    let dev = deviations(dir.path(), "101,1001,10001");
    assert!(dev[0] > dev[1] && dev[1] > dev[2], "{dev:?}");
    for (d, n) in dev.iter().zip([101.0, 1001.0, 10001.0]) {
        assert!(d * n <= 10.0 && d * n >= 0.1, "{dev:?}");
    }
    assert!(dir.path().join("covariance_deviation.dat").exists());
    assert!(dir.path().join("covariance_deviation.gp").exists());
}

#[test]
fn bundled_config_gives_decreasing_medians() {
    let dir = tempfile::tempdir().unwrap();
    let o = fclt(&["experiment", bundled_config().to_str().unwrap()], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    for block in summary["metrics"].as_array().unwrap() {
        assert_eq!(block["medians_strictly_decreasing"], true, "{}", block["metric"]);
    }
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert!(csv.starts_with("n,metric,replicate,distance,is_baseline\n"));
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn invalid_configs_exit_with_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "master_seed = 1\nn_schedule = [16, 16, 8]\nm = 10\nreplicates = 2\n[model]\nfamily = \"rademacher\"\n[[metrics]]\nkind = \"quadrant\"\n",
            "n_schedule must be strictly increasing",
        ),
        (
            "master_seed = 1\nn_schedule = [4, 8]\nm = 10\nreplicates = 2\n[model]\nfamily = \"rademacher\"\n[[metrics]]\nkind = \"mmd\"\nbandwidth = 0.0\n",
            "bandwidth must be positive",
        ),
    ];
    for (body, message) in cases {
        let config = write_config(dir.path(), body);
        let o = fclt(&["experiment", config.to_str().unwrap()], &dir.path().join("out"));
        assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
        assert!(stderr(&o).contains(message), "{}", stderr(&o));
    }
}

#[test]
fn report_tabulates_and_compares_runs() {
    let dir = tempfile::tempdir().unwrap();
    let small = "master_seed = {SEED}\nn_schedule = [8, 64]\nm = 50\nreplicates = 5\n[model]\nfamily = \"gaussian_std\"\n[[metrics]]\nkind = \"quadrant\"\n";
    let mut summaries = Vec::new();
    for seed in ["1", "2"] {
        let config = write_config(dir.path(), &small.replace("{SEED}", seed));
        let out = dir.path().join(format!("run{seed}"));
        let o = fclt(&["experiment", config.to_str().unwrap()], &out);
        assert!(o.status.success(), "{}", stderr(&o));
        summaries.push(out.join("summary.json"));
    }

    let one = fclt(&["report", summaries[0].to_str().unwrap()], &dir.path().join("r1"));
    assert!(one.status.success());
    let text = stdout(&one);
    assert!(text.contains("metric: quadrant"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("64 ")));

    let two = fclt(
        &["report", summaries[0].to_str().unwrap(), summaries[1].to_str().unwrap()],
        &dir.path().join("r2"),
    );
    assert!(two.status.success());
    let text = stdout(&two);
    assert!(text.contains("run1:median") && text.contains("run2:median"));
    assert!(dir.path().join("r2/report.gp").exists());
    assert!(dir.path().join("r2/quadrant_run2.dat").exists());

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"schema_version\": 1,\n  \"metrics\": [oops]\n}\n").unwrap();
    let bad = fclt(&["report", broken.to_str().unwrap()], &dir.path().join("r3"));
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("line 3"), "{}", stderr(&bad));
}

#[test]
fn out_dir_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fclt"))
        .args(["covariance", "--nus", "0.2", "--n-schedule", "10"])
        .env("FCLT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("covariance.json").exists());
}

#[test]
fn unknown_flags_are_usage_errors() {
    let o = Command::new(env!("CARGO_BIN_EXE_fclt")).args(["simulate", "--bogus"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
