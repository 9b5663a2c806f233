use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn egim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"scheme":"egim4qam","channel":"rayleigh","snr_db":[10,20,30],"min_errors":100,"max_frames":2000}"#,
    );
    let out = dir.path().join("run");
    let o = egim(&[
        "sweep",
        "--config",
        &cfg,
        "--seed",
        "3",
        "--workers",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,channel,policy,snr_db,frames,symbols,bits,symbol_errors,bit_errors,ser,ber"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("egim4qam,rayleigh,power_saving,10,"));
    let svg = fs::read_to_string(out.join("sweep.svg")).unwrap();
    // simulated points plus the closed-form overlay
    assert_eq!(svg.matches(r#"class="series""#).count(), 2);
}

#[test]
fn sweep_output_does_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"scheme":"autoencoder","channel":"awgn","decision":"soft","policy":"reinvest","snr_db":[2,4],"min_errors":50,"max_frames":640}"#,
    );
    let run = |workers: &str, name: &str| {
        let out = dir.path().join(name);
        let o = egim(&[
            "sweep",
            "--config",
            &cfg,
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        fs::read(out.join("sweep.csv")).unwrap()
    };
    assert_eq!(run("1", "a"), run("4", "b"));
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"scheme":"egim4qam","channel":"rayleigh","snr_db":[10],"taps":40}"#,
    );
    let o = egim(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("taps"));
    let cfg = write_config(
        dir.path(),
        r#"{"scheme":"qpsk","channel":"awgn","snr_db":[10]}"#,
    );
    assert!(!egim(&["sweep", "--config", &cfg]).status.success());
}

#[test]
fn theory_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = egim(&[
        "theory", "--from", "0", "--to", "10", "--step", "1", "--out", out,
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("theory.csv")).unwrap();
    // five curves on an 11-point grid
    assert_eq!(csv.lines().count(), 1 + 5 * 11);
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("egim4qam_theory,rayleigh,theory,0,"));
    assert!(dir.path().join("theory.svg").exists());

    let svg = dir.path().join("p.svg");
    let o = egim(&[
        "plot",
        dir.path().join("theory.csv").to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(&svg)
            .unwrap()
            .matches(r#"class="series""#)
            .count(),
        5
    );
}

#[test]
fn desync_reports_both_streams() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"trials":50,"stream_bits":512}"#);
    let o = egim(&[
        "desync",
        "--config",
        &cfg,
        "--seed",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("uncoded downstream BER"));
    let csv = fs::read_to_string(dir.path().join("desync.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
}
