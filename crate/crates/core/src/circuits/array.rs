use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::cells::{BernsteinCoeffs, CellCircuit, CellParams, CircuitKind};
use crate::error::{Error, Result};
use crate::faults::plan_for_circuit;
use crate::gates::AbsDiffMode;
use crate::metrics::synthetic::Video;
use crate::metrics::{
    oracle_gamma, oracle_kde, oracle_robert, oracle_threshold, window_offsets, Image,
};
use crate::seeds::{domain, SeedTree};
use crate::sng::{random_clock, ClockDomain, Lfsr, Polarity, SngConfig};
use crate::time::{Time, TimeGrid};
use crate::waveform::Waveform;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockMode {
    /// Every element shares one clock with zero phase.
    Sync,
    /// Every cell, and every stream source outside a cell, draws its own
    /// period and phase.
    Poly,
}

impl ClockMode {
    pub fn name(self) -> &'static str {
        match self {
            ClockMode::Sync => "sync",
            ClockMode::Poly => "poly",
        }
    }
}

impl std::fmt::Display for ClockMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClockMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sync" => Ok(ClockMode::Sync),
            "poly" => Ok(ClockMode::Poly),
            _ => Err(Error::Config(format!("unknown clock mode {s:?}"))),
        }
    }
}

/// Everything a single array evaluation needs besides the inputs and seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: ClockMode,
    /// Bits per stream; every clock gets at least this many edges.
    pub length: usize,
    pub sync_period_ns: f64,
    pub min_period_ns: f64,
    pub max_period_ns: f64,
    /// High pulses strictly shorter than this are removed.
    pub spike_min_ns: f64,
    pub lfsr_width: u32,
    /// Feedback taps; the built-in maximal-length set when absent.
    pub lfsr_taps: Option<Vec<u32>>,
    pub polarity: Polarity,
    pub cell: CellParams,
    pub coeffs: BernsteinCoeffs,
    pub kde_threshold: f64,
    pub fault_rate: f64,
    pub keep_waveforms: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: ClockMode::Sync,
            length: 1024,
            sync_period_ns: 2.0,
            min_period_ns: 2.0,
            max_period_ns: 4.0,
            spike_min_ns: 0.2,
            lfsr_width: 10,
            lfsr_taps: None,
            polarity: Polarity::Below,
            cell: CellParams::default(),
            coeffs: BernsteinCoeffs::default(),
            kde_threshold: 0.5,
            fault_rate: 0.0,
            keep_waveforms: false,
        }
    }
}

impl RunConfig {
    pub fn with_mode(&self, mode: ClockMode) -> Self {
        RunConfig {
            mode,
            ..self.clone()
        }
    }

    /// Measurement window shared by every stream of a run: `length` periods
    /// of the slowest clock the mode can draw.
    pub fn horizon(&self) -> Time {
        let period = match self.mode {
            ClockMode::Sync => self.sync_period_ns,
            ClockMode::Poly => self.max_period_ns,
        };
        Time::from_ns(period) * self.length as u64
    }

    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.length == 0 {
            return bad("stream length must be >= 1".into());
        }
        if !(self.sync_period_ns > 0.0) {
            return bad(format!("sync period {} ns must be > 0", self.sync_period_ns));
        }
        if !(self.min_period_ns > 0.0 && self.min_period_ns <= self.max_period_ns) {
            return bad(format!(
                "clock range [{}, {}] ns is invalid",
                self.min_period_ns, self.max_period_ns
            ));
        }
        if !(self.spike_min_ns >= 0.0) {
            return bad(format!("spike width {} ns must be >= 0", self.spike_min_ns));
        }
        if !(0.0..=1.0).contains(&self.kde_threshold) {
            return bad(format!("KDE threshold {} outside [0, 1]", self.kde_threshold));
        }
        if !(0.0..=1.0).contains(&self.fault_rate) {
            return Err(Error::InvalidRate(self.fault_rate));
        }
        self.lfsr(1)?;
        Ok(())
    }

    pub fn lfsr(&self, seed: u32) -> Result<Lfsr> {
        match &self.lfsr_taps {
            Some(taps) => Lfsr::new(self.lfsr_width, taps, seed),
            None => Lfsr::maximal(self.lfsr_width, seed),
        }
    }

    fn spike_width(&self) -> Time {
        Time::from_ns(self.spike_min_ns)
    }
}

/// Input images for one array run.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitInputs {
    Image(Image),
    Video(Video),
}

impl CircuitInputs {
    /// The frame the array is laid over.
    pub fn frame(&self) -> &Image {
        match self {
            CircuitInputs::Image(i) => i,
            CircuitInputs::Video(v) => &v.current,
        }
    }

    fn video(&self) -> Result<&Video> {
        match self {
            CircuitInputs::Video(v) => Ok(v),
            CircuitInputs::Image(_) => Err(Error::Config(
                "background subtraction needs history frames".into(),
            )),
        }
    }

    /// Software reference output for `kind`.
    pub fn oracle(&self, kind: CircuitKind, cfg: &RunConfig) -> Result<Image> {
        match kind {
            CircuitKind::Robert => Ok(oracle_robert(self.frame())),
            CircuitKind::Gamma => Ok(oracle_gamma(self.frame(), &cfg.coeffs)),
            CircuitKind::Threshold => Ok(oracle_threshold(self.frame(), cfg.cell.window)),
            CircuitKind::Kde => {
                let v = self.video()?;
                oracle_kde(&v.history, &v.current, cfg.kde_threshold)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArrayOutput {
    pub image: Image,
    /// Measured output stream value of every cell, row-major.
    pub estimates: Vec<f64>,
    /// Local clock of every cell, row-major.
    pub clocks: Vec<ClockDomain>,
    /// Filtered output stream of every cell when requested.
    pub waveforms: Option<Vec<Waveform>>,
}

/// A grid of identical cells, one per output pixel.
#[derive(Clone, Debug)]
pub struct CellArray {
    kind: CircuitKind,
    width: usize,
    height: usize,
    circuit: CellCircuit,
    config: RunConfig,
}

impl CellArray {
    pub fn new(kind: CircuitKind, width: usize, height: usize, config: &RunConfig) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch("array dimensions must be > 0".into()));
        }
        config.validate()?;
        Ok(CellArray {
            kind,
            width,
            height,
            circuit: CellCircuit::new(kind, &config.cell)?,
            config: config.clone(),
        })
    }

    pub fn kind(&self) -> CircuitKind {
        self.kind
    }

    pub fn circuit(&self) -> &CellCircuit {
        &self.circuit
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    fn index(&self, row: isize, col: isize) -> usize {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        r * self.width + c
    }

    /// Cells whose pixel streams feed cell `(row, col)`, in circuit input
    /// order, with borders replicated.
    pub fn neighbors(&self, row: usize, col: usize) -> Vec<usize> {
        let (r, c) = (row as isize, col as isize);
        match self.kind {
            CircuitKind::Robert => [(0, 0), (1, 1), (0, 1), (1, 0)]
                .iter()
                .map(|&(dr, dc)| self.index(r + dr, c + dc))
                .collect(),
            CircuitKind::Threshold => {
                let offs = window_offsets(self.config.cell.window);
                offs.clone()
                    .flat_map(|dr| offs.clone().map(move |dc| (dr, dc)))
                    .map(|(dr, dc)| self.index(r + dr, c + dc))
                    .collect()
            }
            CircuitKind::Gamma | CircuitKind::Kde => vec![self.index(r, c)],
        }
    }

    /// Clock `slot` of `cell`: slot 0 drives the cell itself, higher slots
    /// drive stream sources that sit outside it.
    pub fn clock(&self, trial: SeedTree, cell: usize, slot: usize) -> Result<ClockDomain> {
        let h = self.config.horizon();
        let clk = match self.config.mode {
            ClockMode::Sync => ClockDomain::synchronous(Time::from_ns(self.config.sync_period_ns), h)?,
            ClockMode::Poly => random_clock(
                trial.path(&[domain::CLOCKS, cell as u64, slot as u64]).value(),
                self.config.min_period_ns,
                self.config.max_period_ns,
                h,
                TimeGrid::default(),
            )?,
        };
        if clk.edge_count() < self.config.length {
            return Err(Error::Config(format!(
                "clock with period {} ns has {} edges in the window, need {}",
                clk.period(),
                clk.edge_count(),
                self.config.length
            )));
        }
        Ok(clk)
    }

    fn stream(&self, target: f64, seed: SeedTree, clock: &ClockDomain, foreign: bool) -> Result<Waveform> {
        let lfsr = self.config.lfsr(seed.lfsr_seed(self.config.lfsr_width))?;
        let w = SngConfig::new(target, lfsr, *clock)?
            .with_polarity(self.config.polarity)
            .generate_covering();
        Ok(if foreign {
            w.filter_spikes(self.config.spike_width())
        } else {
            w
        })
    }

    /// Stream source for a value that enters from outside the cell. In sync
    /// mode it shares the cell clock.
    fn foreign_clock(&self, trial: SeedTree, cell: usize, slot: usize, own: &ClockDomain) -> Result<ClockDomain> {
        match self.config.mode {
            ClockMode::Sync => Ok(*own),
            ClockMode::Poly => self.clock(trial, cell, slot),
        }
    }

    fn pixel_seed(&self, streams: SeedTree, cell: usize) -> SeedTree {
        match self.config.cell.abs_diff {
            AbsDiffMode::Correlated => streams.child(domain::PIXEL),
            _ => streams.path(&[domain::PIXEL, cell as u64]),
        }
    }

    pub fn run(&self, inputs: &CircuitInputs, trial: SeedTree) -> Result<ArrayOutput> {
        let frame = inputs.frame();
        if frame.width() != self.width || frame.height() != self.height {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} image on a {}x{} array",
                frame.width(),
                frame.height(),
                self.width,
                self.height
            )));
        }
        let video = match self.kind {
            CircuitKind::Kde => {
                let v = inputs.video()?;
                if v.history.len() != self.config.cell.history {
                    return Err(Error::Arity {
                        what: "KDE history frames",
                        expected: self.config.cell.history,
                        got: v.history.len(),
                    });
                }
                if v.history.iter().any(|f| !f.same_dims(frame)) {
                    return Err(Error::DimensionMismatch("history frames differ in size".into()));
                }
                Some(v)
            }
            _ => None,
        };
        let n = self.width * self.height;
        let streams = trial.child(domain::STREAMS);
        let clocks = (0..n)
            .into_par_iter()
            .map(|c| self.clock(trial, c, 0))
            .collect::<Result<Vec<_>>>()?;
        let pixels: Vec<Waveform> = if self.kind == CircuitKind::Gamma {
            Vec::new()
        } else {
            (0..n)
                .into_par_iter()
                .map(|c| {
                    let v = frame.pixels()[c] as f64 / 255.0;
                    self.stream(v, self.pixel_seed(streams, c), &clocks[c], true)
                })
                .collect::<Result<_>>()?
        };

        let results = (0..n)
            .into_par_iter()
            .map(|c| self.eval_cell(c, frame, video, &pixels, &clocks[c], trial))
            .collect::<Result<Vec<_>>>()?;

        let mut estimates = Vec::with_capacity(n);
        let mut waves = self.config.keep_waveforms.then(|| Vec::with_capacity(n));
        for w in results {
            estimates.push(w.measure());
            if let Some(ws) = waves.as_mut() {
                ws.push(w);
            }
        }
        let pixels_out = estimates.iter().map(|&m| self.to_pixel(m)).collect();
        Ok(ArrayOutput {
            image: Image::new(self.width, self.height, pixels_out)?,
            estimates,
            clocks,
            waveforms: waves,
        })
    }

    fn to_pixel(&self, m: f64) -> u8 {
        match self.kind {
            CircuitKind::Robert | CircuitKind::Gamma => (255.0 * m.clamp(0.0, 1.0)).round() as u8,
            CircuitKind::Threshold => {
                if m >= 0.5 {
                    255
                } else {
                    0
                }
            }
            CircuitKind::Kde => {
                if m < self.config.kde_threshold {
                    0
                } else {
                    255
                }
            }
        }
    }

    fn eval_cell(
        &self,
        c: usize,
        frame: &Image,
        video: Option<&Video>,
        pixels: &[Waveform],
        clock: &ClockDomain,
        trial: SeedTree,
    ) -> Result<Waveform> {
        let streams = trial.child(domain::STREAMS);
        let local = |k: u64, p: f64| self.stream(p, streams.path(&[domain::LOCAL, c as u64, k]), clock, false);
        let (row, col) = (c / self.width, c % self.width);
        let mut owned: Vec<Waveform> = Vec::new();
        let mut refs: Vec<&Waveform> = Vec::with_capacity(self.circuit.input_count());
        match self.kind {
            CircuitKind::Robert | CircuitKind::Threshold => {
                let levels = self.circuit.input_count() - self.neighbors(row, col).len();
                owned.extend((0..levels as u64).map(|k| local(k, 0.5)).collect::<Result<Vec<_>>>()?);
                refs.extend(self.neighbors(row, col).into_iter().map(|i| &pixels[i]));
                refs.extend(owned.iter());
            }
            CircuitKind::Gamma => {
                let x = frame.pixels()[c] as f64 / 255.0;
                let targets = std::iter::repeat_n(x, 6).chain(self.config.coeffs.0);
                for (k, p) in targets.enumerate() {
                    let clk = self.foreign_clock(trial, c, 1 + k, clock)?;
                    let seed = streams.path(&[domain::LOCAL, c as u64, k as u64]);
                    let foreign = self.config.mode == ClockMode::Poly;
                    owned.push(self.stream(p, seed, &clk, foreign)?);
                }
                refs.extend(owned.iter());
            }
            CircuitKind::Kde => {
                let v = video.expect("checked by run");
                let levels = self.config.cell.history.trailing_zeros() as u64;
                for (f, img) in v.history.iter().enumerate() {
                    let clk = self.foreign_clock(trial, c, 1 + f, clock)?;
                    let seed = streams.path(&[domain::FRAME, c as u64, f as u64]);
                    owned.push(self.stream(img.pixels()[c] as f64 / 255.0, seed, &clk, true)?);
                }
                for k in 0..levels {
                    owned.push(local(k, 0.5)?);
                }
                owned.push(local(levels, self.config.cell.exp.gate_probability)?);
                refs.push(&pixels[c]);
                refs.extend(owned.iter());
            }
        }
        let errors = if self.config.fault_rate > 0.0 {
            let seed = trial.path(&[domain::FAULTS, c as u64]).value();
            let plan = plan_for_circuit(&self.circuit, self.config.fault_rate, seed, self.config.lfsr_width)?;
            Some(plan.error_waveforms(clock)?)
        } else {
            None
        };
        let out = self.circuit.evaluate(&refs, clock, errors.as_deref())?;
        Ok(out.filter_spikes(self.config.spike_width()))
    }
}

/// Builds an array sized to the input frame and runs one trial.
pub fn run_array(kind: CircuitKind, inputs: &CircuitInputs, cfg: &RunConfig, trial: SeedTree) -> Result<ArrayOutput> {
    let f = inputs.frame();
    CellArray::new(kind, f.width(), f.height(), cfg)?.run(inputs, trial)
}
