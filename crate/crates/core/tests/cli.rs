//! Exit codes and outputs of the `mkdv` binary.

use std::path::Path;
use std::process::{Command, Output};

fn mkdv(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mkdv")).args(args).arg("--out").arg(out).output().unwrap()
}

const SMALL: [&str; 8] = [
    "--override",
    "modes_of_interest=[4,8]",
    "--override",
    "model.max_mode=16",
    "--override",
    "model.t_final=0.001",
    "--override",
    "sample_every=5",
];

#[test]
fn simulate_succeeds_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let mut args = vec!["simulate", "--seed", "3"];
    args.extend(SMALL);
    for out in [&a, &b] {
        let o = mkdv(&args, out);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["snapshots.csv", "conservation.json", "manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = mkdv(&["simulate", "--override", "model.dt=-1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt"));
    let o = mkdv(&["norms", "--override", "no_such_key=1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let o = mkdv(&["simulate", "--config", "/nonexistent/config.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn blow_up_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = mkdv(
        &[
            "simulate",
            "--override",
            r#"u0_spec={"profile":"single_mode","k":1,"epsilon":1e6}"#,
            "--override",
            "model.max_mode=8",
            "--override",
            "modes_of_interest=[1]",
            "--override",
            "model.dt=0.01",
            "--override",
            "model.t_final=1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("conservation.json").exists());
}

fn identities(tol: &str, out: &Path) -> Output {
    let tol = format!("identities.tolerance={tol}");
    mkdv(
        &[
            "identities",
            "--override",
            "identities.scan_bound=8",
            "--override",
            "identities.scan_bound_5=4",
            "--override",
            "identities.random_triples=1000",
            "--override",
            "identities.random_tuples=1000",
            "--override",
            "identities.trials=2",
            "--override",
            "identities.max_mode=32",
            "--override",
            "identities.modes=[8]",
            "--override",
            &tol,
        ],
        out,
    )
}

#[test]
fn identities_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = identities("1e-10", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("identities.json").exists());
    // rounding alone exceeds this tolerance in the floating-point suites
    let o = identities("1e-300", dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}
