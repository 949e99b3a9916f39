use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdstark::Summary;

fn qdstark(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdstark"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn success_writes_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdstark(&["resonance-solve", "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("res/resonance-solve.summary.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
    let rabi2 = Summary::parse(&text).get_f64("rabi2_mev").unwrap();
    assert!((rabi2 / 40.9 - 1.0).abs() < 5e-3);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "omega2_points = 0\n");
    let out = qdstark(&["anticrossing", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let cfg = write_config(dir.path(), "detla1 = 292.0\n");
    let out = qdstark(&["resonance-solve", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("detla1"));

    let out = qdstark(&["resonance-solve", "--config", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "rabi_ratio = 1.0\n");
    let out = qdstark(&["resonance-solve", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "random_drives = 20\n");
    let read = |name: &str| fs::read(dir.path().join(name).join("floquet_validate.csv")).unwrap();
    for (name, extra) in [("a", vec![]), ("b", vec![]), ("c", vec!["--parallel", "2"]), ("d", vec!["--seed", "5"])] {
        let mut args = vec!["floquet-validate", "--config", &cfg, "--out", name];
        args.extend(extra);
        assert_eq!(qdstark(&args, dir.path()).status.code(), Some(0));
    }
    assert_eq!(read("a"), read("b"));
    assert_eq!(read("a"), read("c"));
    assert_ne!(read("a"), read("d"));
    let text = String::from_utf8(read("a")).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("omega1,omega_l,rabi,floquet_shift,formula_shift,discrepancy,pass")
    );
}

#[test]
fn trajectory_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "window_ps = 2.0\nsample_stride_ps = 0.5\n");
    let out = qdstark(&["rwa-populations", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    for name in ["rwa_always_on", "rwa_half_pulse", "rwa_always_off"] {
        let text = fs::read_to_string(dir.path().join("out").join(format!("{name}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t_ps,p00,p01,p10,p11,purity"));
        assert_eq!(lines.count(), 5);
    }
}
