use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaysec"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relaysec-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn outage_prints_every_scheme() {
    let dir = scratch("outage");
    let cfg = write(
        &dir,
        "inst.json",
        r#"{"rate_rs": 0.5, "relays": [{"sr_db": 10, "rd_db": 12, "re_db": 3}, {"sr_db": 8, "rd_db": 15, "re_db": 0}]}"#,
    );
    let o = bin(&["outage", "--config", &cfg]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let labels: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(labels, ["OS", "TS", "SS-RE", "SS-RD", "SS-SR", "PS"]);
    for l in text.lines().skip(1) {
        let p: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn simulate_honours_trials_and_seed() {
    let dir = scratch("simulate");
    let cfg = write(
        &dir,
        "inst.json",
        r#"{"rate_rs": 0.5, "relays": [{"sr_db": 0, "rd_db": 0, "re_db": 0}]}"#,
    );
    let args = [
        "simulate", "--config", &cfg, "--trials", "100000", "--seed", "5", "--scheme", "SINGLE-1",
    ];
    let a = bin(&args);
    assert!(a.status.success(), "{a:?}");
    assert_eq!(stdout(&a), stdout(&bin(&args)));
    let line = stdout(&a).lines().nth(1).unwrap().to_string();
    let fields: Vec<&str> = line.split(',').collect();
    assert_eq!(fields[0], "SINGLE-1");
    let p: f64 = fields[1].parse().unwrap();
    // 1 - e^-2 / 5
    assert!((p - 0.9729329).abs() < 0.002, "{line}");
    assert_eq!(fields[3], "100000");
    assert_eq!(fields[4], "5");
}

#[test]
fn sweep_writes_csv_and_manifest() {
    let dir = scratch("sweep");
    let spec = write(
        &dir,
        "spec.json",
        r#"{"preset": "fig4", "snr_grid_db": [0, 5], "relay_counts": [2]}"#,
    );
    let out = dir.join("out.csv");
    let o = bin(&[
        "sweep",
        "--config",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--trials",
        "5000",
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 2);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["preset"], "fig4");
    assert_eq!(manifest["mc_trials"], 5000);
    assert_eq!(manifest["spec"]["relay_counts"], serde_json::json!([2]));
}

#[test]
fn diversity_fits_a_figure_csv() {
    let dir = scratch("diversity");
    let out = dir.join("fig4.csv");
    let o = bin(&["figure", "fig4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let o = bin(&["diversity", out.to_str().unwrap(), "--window-db", "10"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    for l in text.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        let d: f64 = f[2].parse().unwrap();
        let n = if f[0].contains("N=2") { 2.0 } else { 4.0 };
        let expected =
            if f[0].starts_with("PS") || f[0].starts_with("SS-RD") || f[0].starts_with("SS-SR") {
                1.0
            } else {
                n
            };
        assert!((d - expected).abs() < 0.35, "{l}");
    }
}

#[test]
fn gap_reproduces_worked_values() {
    let o = bin(&[
        "gap",
        "--from-db",
        "0",
        "--to-db",
        "3.0102999566398",
        "--rate",
        "0.5",
        "--rate",
        "1",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let gaps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!((gaps[0] - 2.2185).abs() < 1e-3, "{text}");
    assert!((gaps[1] - 1.9629).abs() < 1e-3, "{text}");
}

#[test]
fn exit_codes() {
    let dir = scratch("exit");
    let bad = write(
        &dir,
        "bad.json",
        r#"{"snr_grid_db": [5, 0], "rates": [1], "eaves_snr_db": 3, "schemes": ["OS"]}"#,
    );
    assert_eq!(bin(&["sweep", "--config", &bad]).status.code(), Some(2));

    let missing = dir.join("nope.json");
    assert_eq!(
        bin(&["sweep", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );

    let unwritable = dir.join("no-such-dir").join("out.csv");
    let o = bin(&["figure", "fig2", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    // eight relays at 70 dB is beyond what the TS expansion can resolve
    let cancel = write(
        &dir,
        "cancel.json",
        r#"{"snr_grid_db": [70], "rates": [1], "eaves_snr_db": 3, "schemes": ["TS"], "relay_counts": [8]}"#,
    );
    let o = bin(&["sweep", "--config", &cancel]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");

    let cap = write(
        &dir,
        "cap.json",
        r#"{"snr_grid_db": [10], "rates": [1], "eaves_snr_db": 3, "schemes": ["TS"], "relay_counts": [5]}"#,
    );
    assert_eq!(
        bin(&["sweep", "--config", &cap, "--max-n", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["sweep", "--config", &cap, "--max-n", "5"])
            .status
            .code(),
        Some(0)
    );
}
