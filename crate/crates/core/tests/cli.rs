use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_forced-invariants"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap_or(f64::NAN))
        .collect()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["simulate", "--t-end", "1"]).status.code(), Some(0));
    let bad = run(&["simulate", "--m", "-1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`m`"));
    assert_eq!(run(&["simulate", "--dt", "0"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--invariant", "resonant"]).status.code(),
        Some(2)
    );
    // ω² overflows, so the very first step is non-finite
    assert_eq!(
        run(&["simulate", "--omega", "1e200", "--t-end", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn headers_are_stable() {
    let first = |args: &[&str]| stdout(&run(args)).lines().next().unwrap().to_string();
    assert_eq!(first(&["simulate", "--t-end", "0.1"]), "t,x,v,K,rel_drift");
    assert_eq!(first(&["particular", "--t-end", "0.1"]), "t,alpha,beta");
    assert_eq!(
        first(&["sweep", "--t-end", "1", "--count", "3"]),
        "Omega,max_amplitude,max_rel_drift"
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["sweep", "--lambda", "0.3", "--t-end", "5", "--count", "17"][..],
        &["verify-pde", "--cap-omega", "1", "--seed", "9"][..],
        &["drift", "--lambda", "0.2", "--t-end", "5"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn equilibrium_stays_zero() {
    let out = run(&[
        "simulate", "--amp", "0", "--x0", "0", "--v0", "0", "--t-end", "1",
    ]);
    let text = stdout(&out);
    for name in ["x", "v", "K", "rel_drift"] {
        assert!(column(text, name).iter().all(|&c| c == 0.0), "{name}");
    }
}

#[test]
fn nonresonant_final_drift() {
    let out = run(&["simulate"]);
    let drift = column(stdout(&out), "rel_drift");
    assert_eq!(drift.len(), 50_001);
    assert!(*drift.last().unwrap() <= 1e-7);
}

#[test]
fn resonant_amplitude_grows_while_k_holds() {
    let text = run(&["simulate", "--cap-omega", "1"]).stdout;
    let text = String::from_utf8(text).unwrap();
    let t = column(&text, "t");
    let x = column(&text, "x");
    let window_max = |lo: f64, hi: f64| {
        t.iter()
            .zip(&x)
            .filter(|(&ti, _)| ti >= lo && ti < hi)
            .map(|(_, xi)| xi.abs())
            .fold(0.0, f64::max)
    };
    let (early, late) = (window_max(5.0, 15.0), window_max(40.0, 50.0));
    assert!(late > 2.5 * early, "{early} -> {late}");
    assert!(column(&text, "rel_drift").iter().all(|&d| d <= 1e-6));
}

#[test]
fn damped_sweep_peaks_near_practical_resonance() {
    let out = run(&[
        "sweep",
        "--lambda",
        "1",
        "--omega-min",
        "0.5",
        "--omega-max",
        "1.5",
        "--count",
        "101",
        "--t-end",
        "20",
    ]);
    let text = stdout(&out);
    let omega = column(text, "Omega");
    let amp = column(text, "max_amplitude");
    let peak = omega[amp
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0];
    assert!((peak - 0.5f64.sqrt()).abs() <= 0.01, "peak at {peak}");
}

#[test]
fn undamped_sweep_grows_toward_the_band() {
    let out = run(&[
        "sweep",
        "--omega-min",
        "0.5",
        "--omega-max",
        "1.5",
        "--count",
        "41",
        "--t-end",
        "10",
    ]);
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = column(text, "Omega")
        .into_iter()
        .zip(column(text, "max_amplitude"))
        .collect();
    assert!(text.contains("excluded"));
    let below: Vec<f64> = rows
        .iter()
        .filter(|r| r.0 < 1.0 && r.1.is_finite())
        .map(|r| r.1)
        .collect();
    let above: Vec<f64> = rows
        .iter()
        .filter(|r| r.0 > 1.0 && r.1.is_finite())
        .map(|r| r.1)
        .collect();
    assert!(below.windows(2).all(|w| w[1] > w[0]));
    assert!(above.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn verify_pde_resonant_order_two() {
    let out = run(&["verify-pde", "--cap-omega", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 2024);
    assert_eq!(v["points"].as_array().unwrap().len(), 20);
    let order = v["order_estimate"].as_f64().unwrap();
    assert!((order - 2.0).abs() <= 0.2, "{order}");
}

#[test]
fn drift_json_fields() {
    let out = run(&["drift", "--lambda", "0.1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["invariant"], "damped_exact");
    assert_eq!(v["policy"], "unwrapped");
    assert!(v["max_rel_drift"].as_f64().unwrap() <= 1e-6);
    let order = v["order_estimate"].as_f64().unwrap();
    assert!((order - 4.0).abs() <= 0.5, "{order}");
}

#[test]
fn flags_override_config() {
    let mut child = bin()
        .args(["particular", "--config", "-", "--amp", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"amp": 1, "cap_omega": 3, "t_end": 1, "dt": 0.5}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let alpha = column(text, "alpha");
    // α = -A sin(Ωt) / (m(Ω² - ω²)) with A = 2 from the flag, Ω = 3 from the file
    let expected = -2.0 * (3.0f64 * 0.5).sin() / 8.0;
    assert!((alpha[1] - expected).abs() <= 1e-15);
}
