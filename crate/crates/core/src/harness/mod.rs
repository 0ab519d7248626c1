//! Experiment orchestration: trials, sync and poly arms, fault-rate sweeps,
//! and the files they produce.
//!
//! Seed layout: trial `t` uses `SeedTree::new(master).child(t)`. Below that,
//! stream sources live under [`domain::STREAMS`], clocks under
//! [`domain::CLOCKS`] and error sources under [`domain::FAULTS`], each keyed
//! by cell index and then by source slot, so any single stream can be
//! regenerated on its own.
//!
//! [`domain::STREAMS`]: crate::seeds::domain::STREAMS
//! [`domain::CLOCKS`]: crate::seeds::domain::CLOCKS
//! [`domain::FAULTS`]: crate::seeds::domain::FAULTS

mod config;
mod report;

pub use config::{
    AbsDiffKind, CircuitSection, ClockSection, FaultSection, InputSection, KdeSection, LfsrSection,
    OutputSection, SngSection, StreamSection, TrialConfig,
};
pub use report::{read_results, report_emit, summarize, write_plot, write_results, SummaryRow};

use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitKind, ClockMode};
use crate::error::{Error, Result};
use crate::faults::{sweep, SweepRow};
use crate::metrics::{error_rate, oracle_gamma_ideal, Image};
use crate::seeds::SeedTree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockRecord {
    pub mode: ClockMode,
    pub periods_ns: Vec<f64>,
    pub phases_ns: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialMeta {
    pub trial: u32,
    pub seed: u64,
    pub clocks: Vec<ClockRecord>,
}

/// A labelled output image.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedImage {
    pub name: String,
    pub image: Image,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub config: TrialConfig,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SummaryRow>,
    pub trials: Vec<TrialMeta>,
    /// Files written by [`report_emit`], relative to the output directory.
    pub files: Vec<String>,
    #[serde(skip)]
    pub images: Vec<NamedImage>,
}

impl TrialReport {
    pub fn summary_for(&self, mode: ClockMode, rate: f64) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.mode == mode && s.rate == rate)
    }
}

fn image_name(kind: CircuitKind, mode: ClockMode, rate: f64, trial: u32) -> String {
    format!("{kind}_{mode}_rate{:03}_trial{trial:02}", (rate * 100.0).round() as u32)
}

/// Runs every trial of every mode at every configured fault rate.
pub fn run_experiment(cfg: &TrialConfig) -> Result<TrialReport> {
    cfg.validate()?;
    let inputs = cfg.load_inputs()?;
    let kind = cfg.circuit.kind;
    let base = cfg.run_config(ClockMode::Sync);
    let rates = cfg.rates();
    let go = || sweep(kind, &inputs, &base, &cfg.modes, &rates, cfg.trials, cfg.sng.master_seed);
    let outcome = if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(go)?
    } else {
        go()?
    };

    let ideal = (kind == CircuitKind::Gamma).then(|| oracle_gamma_ideal(inputs.frame()));
    let ideal_errors = match &ideal {
        Some(g) => Some(
            outcome
                .runs
                .iter()
                .map(|r| error_rate(g, &r.image))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let summary = summarize(&outcome.rows, ideal_errors.as_deref());

    let trials = (0..cfg.trials)
        .map(|t| TrialMeta {
            trial: t,
            seed: SeedTree::new(cfg.sng.master_seed).child(t as u64).value(),
            clocks: cfg
                .modes
                .iter()
                .filter_map(|&m| {
                    outcome.runs.iter().find(|r| r.trial == t && r.mode == m).map(|r| ClockRecord {
                        mode: m,
                        periods_ns: r.clocks.iter().map(|c| c.period().as_ns()).collect(),
                        phases_ns: r.clocks.iter().map(|c| c.phase().as_ns()).collect(),
                    })
                })
                .collect(),
        })
        .collect();

    let mut images = vec![NamedImage {
        name: format!("{kind}_input"),
        image: inputs.frame().clone(),
    }];
    images.push(NamedImage {
        name: format!("{kind}_oracle"),
        image: outcome.oracle.clone(),
    });
    if let Some(g) = ideal {
        images.push(NamedImage {
            name: format!("{kind}_ideal"),
            image: g,
        });
    }
    images.extend(outcome.runs.iter().map(|r| NamedImage {
        name: image_name(kind, r.mode, r.rate, r.trial),
        image: r.image.clone(),
    }));

    Ok(TrialReport {
        config: cfg.clone(),
        rows: outcome.rows,
        summary,
        trials,
        files: Vec::new(),
        images,
    })
}
