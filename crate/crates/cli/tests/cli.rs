use std::path::Path;
use std::process::{Command, Output};

use bolab_core::solver::Trajectory;

fn bolab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bolab"))
        .current_dir(dir)
        .env_remove("BOLAB_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn solving_zero_data_stores_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let o = bolab(dir.path(), &["solve", "--u0", "zero", "--n", "32", "--T", "0.1", "--out", "z.bolab"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let traj = Trajectory::read_from(std::fs::File::open(dir.path().join("z.bolab")).unwrap()).unwrap();
    assert_eq!(traj.grid.n, 32);
    assert_eq!(*traj.times.last().unwrap(), 0.1);
    assert!(traj.fields.iter().all(|f| f.max_abs() == 0.0));
}

#[test]
fn lattice_verification_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bolab(dir.path(), &["verify-lattice", "--max-freq", "16", "--M", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lattice_report.json")).unwrap())
            .unwrap();
    assert_eq!(report["max_freq"], 16);
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["violations"], 0);
    }
}

#[test]
fn config_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = bolab(dir.path(), &["solve", "--config", "missing.json"]);
    assert_eq!(code(&o), 2);

    std::fs::write(dir.path().join("extra.json"), r#"{"version":1,"n":16,"bogus":3}"#).unwrap();
    let o = bolab(dir.path(), &["solve", "--config", "extra.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));

    std::fs::write(dir.path().join("unversioned.json"), r#"{"n":16}"#).unwrap();
    let o = bolab(dir.path(), &["solve", "--config", "unversioned.json"]);
    assert_eq!(code(&o), 2);

    std::fs::write(dir.path().join("broken.json"), "{\"version\":1,").unwrap();
    let o = bolab(dir.path(), &["solve", "--config", "broken.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"version":1,"u0":{"kind":"cos","amplitude":0.1},"n":16,"t_final":0.05}"#,
    )
    .unwrap();
    let o = bolab(dir.path(), &["solve", "--config", "c.json", "--n", "32", "--out", "t.bolab"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let traj = Trajectory::read_from(std::fs::File::open(dir.path().join("t.bolab")).unwrap()).unwrap();
    assert_eq!(traj.grid.n, 32);
    assert_eq!(*traj.times.last().unwrap(), 0.05);
}

#[test]
fn bad_thread_setting_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bolab"))
        .current_dir(dir.path())
        .env("BOLAB_THREADS", "many")
        .args(["verify-lattice", "--max-freq", "4"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let o = bolab(dir.path(), &["--threads", "0", "verify-lattice", "--max-freq", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn out_of_range_exponent_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = bolab(
        dir.path(),
        &["strichartz", "--u0", "cos", "--n", "16", "--s", "0", "--p", "5", "--T", "0.1", "--bands", "1"],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn scan_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "difference", "--u0", "cos", "--n", "32", "--s", "0.25", "--T", "0.2", "--samples",
            "4", "--dt", "0.01", "--dt2", "0.005", "--out", out,
        ]
    };
    for out in ["a.csv", "b.csv"] {
        let o = bolab(dir.path(), &args(out));
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("scan_type,seed,N,s,delta_or_p,t_or_band,value,comparator,ratio\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 5);
}
