use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphene-dsmc"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMOKE: &str = r#"{"simulation": {"n_particles": 2000, "t_end_ps": 2.0, "ee_enabled": true}}"#;

#[test]
fn missing_config_exits_2_and_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", "--config", "does/not/exist.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("does/not/exist.json"), "{stderr}");
}

#[test]
fn syntax_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{\n  \"simulation\": {\n    \"n_particles\": ,\n  }\n}");
    let out = run(&["run", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config.json:3:"), "{stderr}");
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"simulation": {"particles": 10}}"#);
    let out = run(&["run", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn smoke_run_writes_three_files_and_no_ee_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMOKE);
    let out = run(&["run", "--config", &cfg, "--no-ee", "--out", "r"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = dir.path().join("r");
    for f in ["timeseries.csv", "snapshot.csv", "metadata.json"] {
        assert!(r.join(f).is_file(), "{f} missing");
    }
    let meta = fs::read_to_string(r.join("metadata.json")).unwrap();
    assert!(meta.contains("\"ee_enabled\": false"), "{meta}");
    let ts = fs::read_to_string(r.join("timeseries.csv")).unwrap();
    let hash_line = ts.lines().next().unwrap();
    assert!(hash_line.starts_with("# config_hash="));
    let snap = fs::read_to_string(r.join("snapshot.csv")).unwrap();
    assert_eq!(snap.lines().next(), Some(hash_line));
    assert_eq!(ts.lines().count(), 2 + 41);
}

#[test]
fn serial_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"simulation": {"n_particles": 1000, "t_end_ps": 0.5, "seed": 5}}"#,
    );
    for name in ["a", "b"] {
        let out = run(&["run", "--config", &cfg, "--out", name], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["timeseries.csv", "snapshot.csv", "metadata.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(a == b, "{f} differs");
    }
}

#[test]
fn compare_of_identical_runs_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"simulation": {"n_particles": 500, "t_end_ps": 0.5, "ee_enabled": false}}"#,
    );
    assert!(run(&["run", "--config", &cfg, "--out", "a"], dir.path()).status.success());
    let out = run(&["compare", "a", "a", "--out", "c"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("velocity reduction: 0.00%"), "{stdout}");
    assert!(dir.path().join("c/compare.csv").is_file());
}

#[test]
fn compare_refuses_different_physics() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fs::write(&a, r#"{"simulation": {"n_particles": 500, "t_end_ps": 0.2, "ee_enabled": false}}"#).unwrap();
    fs::write(&b, r#"{"simulation": {"n_particles": 600, "t_end_ps": 0.2, "ee_enabled": false}}"#).unwrap();
    assert!(run(&["run", "--config", a.to_str().unwrap(), "--out", "ra"], dir.path()).status.success());
    assert!(run(&["run", "--config", b.to_str().unwrap(), "--out", "rb"], dir.path()).status.success());
    let out = run(&["compare", "ra", "rb"], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("n_particles"), "{stderr}");
}

#[test]
fn rates_dump_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"simulation": {"grid": {"cells_per_side": 40}}}"#);
    let out = run(&["rates", "--config", &cfg, "--out", "rates", "--ee", "--ee-points", "6"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("rates/phonon_rates.csv")).unwrap();
    let sim = graphene_dsmc::SimConfig {
        grid: graphene_dsmc::engine::GridConfig {
            cells_per_side: 40,
            ..Default::default()
        },
        ..Default::default()
    };
    let rates = graphene_dsmc::PhononRates::new(&sim.material_params().unwrap());
    let mut acoustic_per_eps = Vec::new();
    for line in text.lines().skip(2) {
        let vals: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let lib = rates.all(vals[0]);
        for c in 0..5 {
            assert_eq!(vals[c + 1].to_bits(), lib[c].to_bits(), "eps {}", vals[0]);
        }
        if vals[0] > 0.0 {
            acoustic_per_eps.push(vals[1] / vals[0]);
        }
    }
    let first = acoustic_per_eps[0];
    assert!(acoustic_per_eps.iter().all(|r| (r / first - 1.0).abs() < 1e-12));
    let ee = fs::read_to_string(dir.path().join("rates/ee_rates.csv")).unwrap();
    assert_eq!(ee.lines().count(), 2 + 6);
}

#[test]
fn ee_rate_vanishes_for_empty_band() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"simulation": {"eps_f_ev": -3.0, "grid": {"cells_per_side": 40}}}"#,
    );
    let out = run(&["rates", "--config", &cfg, "--out", "r", "--ee", "--ee-points", "4"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ee = fs::read_to_string(dir.path().join("r/ee_rates.csv")).unwrap();
    for line in ee.lines().skip(2) {
        let intra: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(intra < 1e-30, "{line}");
    }
}

#[test]
fn analyze_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["analyze", "--quick", "--out", "a"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(dir.path().join("a/analysis.json").is_file());
}
