use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitKind, ClockMode};
use crate::error::{Error, Result};
use crate::faults::SweepRow;
use crate::harness::TrialReport;
use crate::metrics::Stats;

/// Mean error over trials for one circuit, mode and rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub circuit: CircuitKind,
    pub mode: ClockMode,
    pub rate: f64,
    pub trials: usize,
    pub mean_error_pct: f64,
    pub stddev_error_pct: f64,
    /// Gamma only: mean error against the ideal power curve.
    pub mean_ideal_error_pct: Option<f64>,
}

/// Groups rows by circuit, mode and rate in order of first appearance.
/// `ideal`, when given, runs parallel to `rows`.
pub fn summarize(rows: &[SweepRow], ideal: Option<&[f64]>) -> Vec<SummaryRow> {
    let mut keys: Vec<(CircuitKind, ClockMode, f64)> = Vec::new();
    for r in rows {
        let k = (r.circuit, r.mode, r.rate);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(circuit, mode, rate)| {
            let idx: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| (r.circuit, r.mode, r.rate) == (circuit, mode, rate))
                .map(|(i, _)| i)
                .collect();
            let errs: Vec<f64> = idx.iter().map(|&i| rows[i].error_pct).collect();
            let s = Stats::of(&errs);
            SummaryRow {
                circuit,
                mode,
                rate,
                trials: s.n,
                mean_error_pct: s.mean,
                stddev_error_pct: s.stddev,
                mean_ideal_error_pct: ideal
                    .map(|v| Stats::of(&idx.iter().map(|&i| v[i]).collect::<Vec<_>>()).mean),
            }
        })
        .collect()
}

/// One row per circuit, mode, rate and trial.
pub fn write_results<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["circuit", "mode", "rate", "trial", "error_pct"])?;
    for r in rows {
        w.write_record([
            r.circuit.to_string(),
            r.mode.to_string(),
            r.rate.to_string(),
            r.trial.to_string(),
            r.error_pct.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<SweepRow>, _>>()?;
    if let Some(bad) = rows.iter().find(|r| !(0.0..=100.0).contains(&r.error_pct)) {
        return Err(Error::Invariant(format!(
            "error {} outside [0, 100] for {} {} trial {}",
            bad.error_pct, bad.circuit, bad.mode, bad.trial
        )));
    }
    Ok(rows)
}

/// Rate against mean error per mode, for external plotting.
pub fn write_plot<W: Write>(summary: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "circuit",
        "mode",
        "rate",
        "trials",
        "mean_error_pct",
        "stddev_error_pct",
        "mean_ideal_error_pct",
    ])?;
    for s in summary {
        w.write_record([
            s.circuit.to_string(),
            s.mode.to_string(),
            s.rate.to_string(),
            s.trials.to_string(),
            s.mean_error_pct.to_string(),
            s.stddev_error_pct.to_string(),
            s.mean_ideal_error_pct.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `results.csv`, `plot.csv`, `config.toml`, `report.json` and, if
/// enabled, every output image as PGM under `images/`. Returns the files
/// written; rewriting the same report produces identical files.
pub fn report_emit(report: &mut TrialReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut rel: Vec<String> = vec![
        "results.csv".into(),
        "plot.csv".into(),
        "config.toml".into(),
    ];
    write_results(&report.rows, std::fs::File::create(dir.join("results.csv"))?)?;
    write_plot(&report.summary, std::fs::File::create(dir.join("plot.csv"))?)?;
    std::fs::write(dir.join("config.toml"), report.config.to_toml_string()?)?;
    if report.config.output.images {
        std::fs::create_dir_all(dir.join("images"))?;
        for img in &report.images {
            let name = format!("images/{}.pgm", img.name);
            img.image.save_pgm(dir.join(&name))?;
            rel.push(name);
        }
    }
    rel.push("report.json".into());
    report.files = rel.clone();
    let json = serde_json::to_string_pretty(&*report).map_err(|e| Error::Invariant(e.to_string()))?;
    std::fs::write(dir.join("report.json"), json)?;
    Ok(rel.into_iter().map(|r| dir.join(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(mode: ClockMode, rate: f64, trial: u32, e: f64) -> SweepRow {
        SweepRow {
            circuit: CircuitKind::Robert,
            mode,
            rate,
            trial,
            error_pct: e,
        }
    }

    #[test]
    fn csv_round_trip_and_summary() {
        let rows = vec![
            row(ClockMode::Sync, 0.0, 0, 1.0),
            row(ClockMode::Poly, 0.0, 0, 2.0),
            row(ClockMode::Sync, 0.0, 1, 3.0),
            row(ClockMode::Poly, 0.0, 1, 4.0),
        ];
        let mut buf = Vec::new();
        write_results(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("circuit,mode,rate,trial,error_pct\nrobert,sync,0,0,1\n"));
        assert_eq!(read_results(&buf[..]).unwrap(), rows);
        let s = summarize(&rows, None);
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].mode, s[0].mean_error_pct), (ClockMode::Sync, 2.0));
        assert_eq!((s[1].mode, s[1].mean_error_pct), (ClockMode::Poly, 3.0));
    }

    #[test]
    fn out_of_range_error_is_an_invariant_violation() {
        let text = "circuit,mode,rate,trial,error_pct\nrobert,sync,0,0,140\n";
        let e = read_results(text.as_bytes()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
