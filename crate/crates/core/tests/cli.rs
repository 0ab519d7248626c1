use std::process::Command;

fn polysync() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polysync"))
}

#[test]
fn simulate_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = polysync()
        .args(["simulate", "--circuit", "robert", "--size", "6", "--trials", "1", "--length", "128"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("circuit,mode,rate,trial,error_pct\n"));
    assert!(out.join("images/robert_oracle.pgm").exists());

    let agg = dir.path().join("agg");
    let o = polysync()
        .arg("report")
        .arg("--input")
        .arg(out.join("results.csv"))
        .arg("--out")
        .arg(&agg)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("robert"));
    assert!(agg.join("plot.csv").exists());
}

#[test]
fn inject_sweep_rates_flag() {
    let dir = tempfile::tempdir().unwrap();
    let status = polysync()
        .args(["inject-sweep", "--size", "4", "--trials", "1", "--length", "64", "--no-images"])
        .args(["--rates", "0,0.1", "--modes", "sync"])
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| polysync().args(args).current_dir(dir.path()).output().unwrap().status.code();
    assert_eq!(code(&["simulate", "--trials", "0"]), Some(1));
    assert_eq!(code(&["simulate", "--set", "lfsr.width=2"]), Some(1));
    assert_eq!(code(&["simulate", "--bogus"]), Some(1));
    assert_eq!(code(&["simulate", "--config", "nope.toml"]), Some(2));
    assert_eq!(code(&["simulate", "--image", "nope.pgm"]), Some(2));
    std::fs::write(dir.path().join("bad.csv"), "circuit,mode,rate,trial,error_pct\nrobert,sync,0,0,250\n").unwrap();
    assert_eq!(code(&["report", "--input", "bad.csv"]), Some(3));
    assert_eq!(code(&["--help"]), Some(0));
}
