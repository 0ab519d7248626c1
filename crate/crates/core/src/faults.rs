//! Soft-error injection.
//!
//! Every computational element of a cell gets an XOR tap on each input and
//! on its output, except that a wire is only ever tapped once: it belongs to
//! the first element that reads it, and the cell output belongs to the
//! element that drives it. Each tap has its own LFSR error source; within an
//! element only one source is enabled per local clock cycle, in round-robin
//! order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{run_array, CellCircuit, CircuitInputs, CircuitKind, ClockMode, Netlist, RunConfig, WireId};
use crate::error::{Error, Result};
use crate::metrics::{error_rate, Image};
use crate::seeds::SeedTree;
use crate::sng::{quantize, ClockDomain, Lfsr};
use crate::waveform::Waveform;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Port {
    Input(usize),
    Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tap {
    pub element: usize,
    pub port: Port,
    pub wire: WireId,
}

/// LFSR and comparator emitting one flip decision per local clock cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSource {
    lfsr: Lfsr,
    threshold: u32,
    clock: ClockDomain,
}

impl ErrorSource {
    pub fn new(lfsr: Lfsr, probability: f64, clock: ClockDomain) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::InvalidRate(probability));
        }
        let threshold = quantize(probability, lfsr.width());
        Ok(ErrorSource {
            lfsr,
            threshold,
            clock,
        })
    }

    pub fn probability(&self) -> f64 {
        self.threshold as f64 / self.lfsr.range() as f64
    }

    pub fn clock(&self) -> &ClockDomain {
        &self.clock
    }

    /// One decision per clock slot. The register advances every slot whether
    /// or not the source is enabled.
    pub fn bits(&self) -> Vec<bool> {
        let mut l = self.lfsr.clone();
        (0..self.clock.slot_count())
            .map(|_| l.step() < self.threshold)
            .collect()
    }
}

/// XORs `w` with the source over every enabled slot whose decision is 1.
pub fn inject<F>(w: &Waveform, src: &ErrorSource, enable: F) -> Result<Waveform>
where
    F: Fn(usize) -> bool,
{
    let flips: Vec<bool> = src
        .bits()
        .into_iter()
        .enumerate()
        .map(|(k, b)| b && enable(k))
        .collect();
    if !flips.contains(&true) {
        if w.horizon() != src.clock.horizon() {
            return Err(Error::HorizonMismatch(src.clock.horizon(), w.horizon()));
        }
        return Ok(w.clone());
    }
    w.combine2(&src.clock.hold(&flips)?, |a, b| a ^ b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaultPlan {
    rate: f64,
    lfsr_width: u32,
    wire_count: usize,
    taps: Vec<Tap>,
    seeds: Vec<u32>,
    /// Tap indices of each element in round-robin order.
    schedules: Vec<Vec<usize>>,
}

pub fn plan_for_circuit(cell: &CellCircuit, rate: f64, master_seed: u64, lfsr_width: u32) -> Result<FaultPlan> {
    plan_for_netlist(cell.netlist(), rate, master_seed, lfsr_width)
}

pub fn plan_for_netlist(net: &Netlist, rate: f64, master_seed: u64, lfsr_width: u32) -> Result<FaultPlan> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidRate(rate));
    }
    Lfsr::maximal(lfsr_width, 1)?;
    let mut owned = vec![false; net.wires().len()];
    let mut taps = Vec::new();
    let mut schedules = vec![Vec::new(); net.elements().len()];
    for (e, el) in net.elements().iter().enumerate() {
        for (p, &w) in el.inputs.iter().enumerate() {
            if !owned[w.0] {
                owned[w.0] = true;
                schedules[e].push(taps.len());
                taps.push(Tap {
                    element: e,
                    port: Port::Input(p),
                    wire: w,
                });
            }
        }
        if el.output == net.output() && !owned[el.output.0] {
            owned[el.output.0] = true;
            schedules[e].push(taps.len());
            taps.push(Tap {
                element: e,
                port: Port::Output,
                wire: el.output,
            });
        }
    }
    let root = SeedTree::new(master_seed);
    let seeds = (0..taps.len() as u64)
        .map(|t| root.child(t).lfsr_seed(lfsr_width))
        .collect();
    Ok(FaultPlan {
        rate,
        lfsr_width,
        wire_count: net.wires().len(),
        taps,
        seeds,
        schedules,
    })
}

impl FaultPlan {
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn schedule(&self, element: usize) -> &[usize] {
        &self.schedules[element]
    }

    /// Per-cycle flip probability of a tap while enabled: the rate scaled by
    /// the number of taps sharing its element, capped at 1.
    pub fn tap_probability(&self, tap: usize) -> f64 {
        let n = self.schedules[self.taps[tap].element].len() as f64;
        (self.rate * n).min(1.0)
    }

    pub fn enabled(&self, tap: usize, cycle: usize) -> bool {
        let s = &self.schedules[self.taps[tap].element];
        s[cycle % s.len()] == tap
    }

    pub fn source(&self, tap: usize, clock: &ClockDomain) -> Result<ErrorSource> {
        let lfsr = Lfsr::maximal(self.lfsr_width, self.seeds[tap])?;
        ErrorSource::new(lfsr, self.tap_probability(tap), *clock)
    }

    /// Flip decisions actually applied by `tap`, one per clock slot.
    pub fn flips(&self, tap: usize, clock: &ClockDomain) -> Result<Vec<bool>> {
        Ok(self
            .source(tap, clock)?
            .bits()
            .into_iter()
            .enumerate()
            .map(|(k, b)| b && self.enabled(tap, k))
            .collect())
    }

    /// One optional flip waveform per netlist wire, ready for
    /// [`Netlist::evaluate`].
    pub fn error_waveforms(&self, clock: &ClockDomain) -> Result<Vec<Option<Waveform>>> {
        let mut out = vec![None; self.wire_count];
        if self.rate == 0.0 {
            return Ok(out);
        }
        for (t, tap) in self.taps.iter().enumerate() {
            let flips = self.flips(t, clock)?;
            if flips.contains(&true) {
                out[tap.wire.0] = Some(clock.hold(&flips)?);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub circuit: CircuitKind,
    pub mode: ClockMode,
    pub rate: f64,
    pub trial: u32,
    pub error_pct: f64,
}

/// One array evaluation of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRun {
    pub mode: ClockMode,
    pub rate: f64,
    pub trial: u32,
    pub image: Image,
    pub clocks: Vec<ClockDomain>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub oracle: Image,
    pub rows: Vec<SweepRow>,
    pub runs: Vec<SweepRun>,
}

/// Runs every `(rate, trial, mode)` combination against the software
/// reference. Trial `t` derives all seeds from `SeedTree::new(master).child(t)`
/// for every rate and mode, so arms differ only in clocking and injection.
pub fn sweep(
    kind: CircuitKind,
    inputs: &CircuitInputs,
    base: &RunConfig,
    modes: &[ClockMode],
    rates: &[f64],
    trials: u32,
    master_seed: u64,
) -> Result<SweepOutcome> {
    if let Some(&r) = rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::InvalidRate(r));
    }
    let oracle = inputs.oracle(kind, base)?;
    let jobs: Vec<(f64, u32, ClockMode)> = rates
        .iter()
        .flat_map(|&r| (0..trials).flat_map(move |t| modes.iter().map(move |&m| (r, t, m))))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(rate, trial, mode)| {
            let cfg = RunConfig {
                mode,
                fault_rate: rate,
                keep_waveforms: false,
                ..base.clone()
            };
            let out = run_array(kind, inputs, &cfg, SeedTree::new(master_seed).child(trial as u64))?;
            Ok(SweepRun {
                mode,
                rate,
                trial,
                image: out.image,
                clocks: out.clocks,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = runs
        .iter()
        .map(|r| {
            Ok(SweepRow {
                circuit: kind,
                mode: r.mode,
                rate: r.rate,
                trial: r.trial,
                error_pct: error_rate(&oracle, &r.image)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepOutcome { oracle, rows, runs })
}
