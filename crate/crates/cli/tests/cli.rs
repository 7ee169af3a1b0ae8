use phan_cli::{build_report, run, Command, RunConfig, RunError, Status};
use std::path::PathBuf;
use std::process::Command as Process;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("phan-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn unsupported_parameters_are_rejected() {
    for (cmd, n, p) in [(Command::Gamma, 4, 4), (Command::Gamma, 9, 2), (Command::Cover, 4, 3), (Command::Amalgam, 4, 2), (Command::Groups, 5, 3)] {
        let err = build_report(&RunConfig::new(cmd, n, p)).unwrap_err();
        assert!(matches!(err, RunError::Unsupported(_)), "{} n={n} p={p}: {err}", cmd.name());
    }
}

#[test]
fn zero_caps_are_invalid() {
    let mut cfg = RunConfig::new(Command::Gamma, 4, 2);
    cfg.max_cosets = 0;
    assert!(matches!(cfg.validate(), Err(RunError::Config(_))));
    let mut cfg = RunConfig::new(Command::Gamma, 4, 2);
    cfg.cap_mb = Some(0);
    assert!(matches!(cfg.validate(), Err(RunError::Config(_))));
}

#[test]
fn memory_ceiling_tightens_caps() {
    let mut cfg = RunConfig::new(Command::Pi1, 4, 3);
    let loose = cfg.effective_caps();
    cfg.cap_mb = Some(1);
    let tight = cfg.effective_caps();
    assert_eq!(tight.max_cosets, (1 << 20) / 64);
    assert!(tight.max_cosets < loose.max_cosets);
    assert!(tight.max_group <= loose.max_group);
    assert!(tight.max_triangles <= loose.max_triangles);
}

#[test]
fn gamma_report_passes_and_is_deterministic() {
    let cfg = RunConfig::new(Command::Gamma, 4, 2);
    let a = build_report(&cfg).unwrap();
    let b = build_report(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.exit_code, 0);
    assert!(a.checks().all(|c| c.status != Status::Fail));
    assert!(a.section("gamma").is_some());
}

#[test]
fn all_lists_skipped_sections() {
    let r = build_report(&RunConfig::new(Command::All, 3, 2)).unwrap();
    for name in ["cover", "groups", "amalgam"] {
        assert!(r.skipped.contains_key(name), "{name} not skipped");
    }
    assert!(r.section("gamma").is_some());
}

#[test]
fn run_writes_report_and_dot_files() {
    let dir = scratch("run");
    let mut cfg = RunConfig::new(Command::Pi, 4, 2);
    cfg.out = Some(dir.clone());
    cfg.dot = true;
    let out = run(&cfg).unwrap();
    let json = dir.join("pi-n4-p2.json");
    assert!(out.files.contains(&json));
    assert!(out.files.contains(&dir.join("pi-n4-p2.dot")));
    assert_eq!(std::fs::read_to_string(&json).unwrap(), out.report.to_json());
    let dot = std::fs::read_to_string(dir.join("pi-n4-p2.dot")).unwrap();
    assert!(dot.starts_with("graph") || dot.starts_with("digraph"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_phan");
    let ok = Process::new(bin).args(["gamma", "--n", "4", "--p", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["exit_code"], 0);
    let bad = Process::new(bin).args(["gamma", "--n", "4", "--p", "11"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let cap = Process::new(bin).args(["gamma", "--n", "4", "--p", "2"]).env("PHAN_CAP_MB", "lots").output().unwrap();
    assert_eq!(cap.status.code(), Some(2));
}
