// A full experiment from a TOML description, written out as CSV, PGM and
// JSON files.

use polysync::harness::{report_emit, run_experiment, TrialConfig};

const CONFIG: &str = r#"
trials = 3
modes = ["sync", "poly"]
lfsr.width = 10
sng.master_seed = 11
clock.min_ns = 2.0
clock.max_ns = 4.0
stream.length = 1024

[circuit]
kind = "gamma"

[input]
synthetic = "ramp"
size = 16

[faults]
rates = [0.0, 0.1]
"#;

pub fn run_example() -> polysync::Result<()> {
    let mut cfg = TrialConfig::from_toml_str(CONFIG)?;
    let dir = std::env::temp_dir().join("polysync-experiment-report");
    cfg.output.dir = dir.clone();
    let mut report = run_experiment(&cfg)?;
    let files = report_emit(&mut report, &dir)?;
    for s in &report.summary {
        println!(
            "{} {} rate {:.2}: {:.3}% (ideal curve {:.3}%)",
            s.circuit,
            s.mode,
            s.rate,
            s.mean_error_pct,
            s.mean_ideal_error_pct.unwrap_or(f64::NAN)
        );
    }
    println!("{} files under {}", files.len(), dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
