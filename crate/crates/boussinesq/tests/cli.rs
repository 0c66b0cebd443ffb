use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use boussinesq::spectral::snapshot::read_snapshot;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("boussinesq-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(config: &Path, out: &Path, threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boussinesq"))
        .arg("run")
        .arg(config)
        .arg("--output-dir")
        .arg(out)
        .arg("--threads")
        .arg(threads.to_string())
        .output()
        .unwrap()
}

const SMALL_MODAL: &str = r#"
name = "small_modal"
kind = "modal-ode"
seed = 7

[params]
alpha = 0.0
beta = 1.0

[modes]
random = { count = 6, k_max = 3, xi_max = 2.0 }
omega0 = [0.3, -0.2]
theta0 = [1.0, 0.5]

[time]
t_end = 5.0
samples = 11
"#;

const SMALL_NONLINEAR: &str = r#"
name = "small_nonlinear"
kind = "nonlinear-run"
seed = 3

[params]
alpha = 1.0
beta = 1.0
nu = 0.1
eta = 0.1
sobolev_n = 2

[sim]
grid = 16
dt = 0.05
t_end = 0.5

[ic]
profile = "random-band"
k_band = 2
xi_band = 2.0
eps_rule = "explicit"
eps_omega = 1e-3
eps_theta = 1e-3

[runs]
seeds = [1, 2]
"#;

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = scratch("determinism");
    let cfg = dir.join("small.toml");
    fs::write(&cfg, SMALL_MODAL).unwrap();
    let a = run(&cfg, &dir.join("a"), 1);
    let b = run(&cfg, &dir.join("b"), 3);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&a.stdout).trim(), "PASS small_modal");
    for f in ["series.csv", "fits.json", "summary.json"] {
        let x = fs::read(dir.join("a").join(f)).unwrap();
        let y = fs::read(dir.join("b").join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("a/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["kind"], "modal-ode");
    let csv = fs::read_to_string(dir.join("a/series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("t,m0_omega_re,m0_omega_im,m0_theta_re,m0_theta_im,"));
}

#[test]
fn failing_checks_exit_with_one() {
    let dir = scratch("failing");
    let cfg = dir.join("strict.toml");
    fs::write(&cfg, format!("{SMALL_MODAL}\n[checks]\nclosed_form_tol = 1e-300\n")).unwrap();
    let o = run(&cfg, &dir.join("out"), 1);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "FAIL small_modal");
    assert!(dir.join("out/summary.json").exists());
}

#[test]
fn bad_config_exits_with_two_and_a_position() {
    let dir = scratch("bad");
    let cfg = dir.join("bad.toml");
    fs::write(&cfg, SMALL_MODAL.replace("samples = 11", "samples = 11\nsampels = 3")).unwrap();
    let o = run(&cfg, &dir.join("out"), 1);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sampels"), "{err}");
    assert!(err.contains("line"), "{err}");
    assert!(!dir.join("out").exists());
}

#[test]
fn nonlinear_run_writes_a_readable_snapshot() {
    let dir = scratch("snapshot");
    let cfg = dir.join("nl.toml");
    fs::write(&cfg, SMALL_NONLINEAR).unwrap();
    let o = run(&cfg, &dir.join("out"), 2);
    assert!(o.status.code().unwrap() <= 1, "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = fs::read(dir.join("out/final_state.bin")).unwrap();
    let (state, params) = read_snapshot(&bytes[..]).unwrap();
    assert_eq!(params.alpha, 1.0);
    assert!((state.t - 0.5).abs() < 1e-12);
    let csv = fs::read_to_string(dir.join("out/series.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("r1_hn_sum"));
}
