use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuits::{BernsteinCoeffs, CellParams, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use crate::error::{Error, Result};
use crate::gates::{AbsDiffMode, ExpFsmParams};
use crate::metrics::synthetic::{self, Video};
use crate::metrics::Image;
use crate::sng::Polarity;

/// Experiment description, read from TOML. Every field has a default, so an
/// empty file is a valid configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub trials: u32,
    pub modes: Vec<ClockMode>,
    /// Worker threads; 0 uses the ambient pool.
    pub threads: usize,
    pub circuit: CircuitSection,
    pub lfsr: LfsrSection,
    pub sng: SngSection,
    pub clock: ClockSection,
    pub stream: StreamSection,
    pub faults: FaultSection,
    pub input: InputSection,
    pub output: OutputSection,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsDiffKind {
    Correlated,
    Independent,
    Paired,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitSection {
    pub kind: CircuitKind,
    pub window: usize,
    pub comparator_states: u32,
    pub abs_diff: AbsDiffKind,
    pub pair_depth: u32,
    pub bernstein: [f64; 7],
    pub kde: KdeSection,
    pub exp: ExpFsmParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KdeSection {
    pub threshold: f64,
    pub history: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LfsrSection {
    pub width: u32,
    /// 1-based feedback positions; the built-in maximal set when empty.
    pub taps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SngSection {
    pub master_seed: u64,
    pub polarity: Polarity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClockSection {
    pub min_ns: f64,
    pub max_ns: f64,
    pub sync_ns: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StreamSection {
    pub length: usize,
    pub spike_min_ns: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct FaultSection {
    /// Empty means a baseline run at rate 0.
    pub rates: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputSection {
    /// PGM image for the single-frame circuits.
    pub image: Option<PathBuf>,
    /// History PGMs for background subtraction, oldest first.
    pub frames: Vec<PathBuf>,
    pub current: Option<PathBuf>,
    /// Built-in input when no files are given: ramp, checkerboard, noise,
    /// scene, halftone or video. Defaults per circuit.
    pub synthetic: Option<String>,
    pub size: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub images: bool,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 10,
            modes: vec![ClockMode::Sync, ClockMode::Poly],
            threads: 0,
            circuit: CircuitSection::default(),
            lfsr: LfsrSection::default(),
            sng: SngSection::default(),
            clock: ClockSection::default(),
            stream: StreamSection::default(),
            faults: FaultSection::default(),
            input: InputSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl Default for CircuitSection {
    fn default() -> Self {
        let cell = CellParams::default();
        CircuitSection {
            kind: CircuitKind::Robert,
            window: cell.window,
            comparator_states: cell.comparator_states,
            abs_diff: AbsDiffKind::Paired,
            pair_depth: 16,
            bernstein: BernsteinCoeffs::default().0,
            kde: KdeSection::default(),
            exp: cell.exp,
        }
    }
}

impl Default for KdeSection {
    fn default() -> Self {
        KdeSection {
            threshold: 0.5,
            history: 32,
        }
    }
}

impl Default for LfsrSection {
    fn default() -> Self {
        LfsrSection {
            width: 10,
            taps: Vec::new(),
        }
    }
}

impl Default for SngSection {
    fn default() -> Self {
        SngSection {
            master_seed: 1,
            polarity: Polarity::Below,
        }
    }
}

impl Default for ClockSection {
    fn default() -> Self {
        ClockSection {
            min_ns: 2.0,
            max_ns: 4.0,
            sync_ns: 2.0,
        }
    }
}

impl Default for StreamSection {
    fn default() -> Self {
        StreamSection {
            length: 1024,
            spike_min_ns: 0.2,
        }
    }
}

impl Default for InputSection {
    fn default() -> Self {
        InputSection {
            image: None,
            frames: Vec::new(),
            current: None,
            synthetic: None,
            size: 32,
            seed: 7,
        }
    }
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("polysync-out"),
            images: true,
        }
    }
}

impl TrialConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Sets a dotted key such as `lfsr.width` from its TOML text. Bare words
    /// that are not valid TOML are taken as strings.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let mut root = toml::Table::try_from(&*self).map_err(|e| Error::Config(e.to_string()))?;
        let parsed: toml::Value = format!("v = {value}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let mut parts: Vec<&str> = key.split('.').collect();
        let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| Error::Config(format!("empty key {key:?}")))?;
        let mut table = &mut root;
        for p in parts {
            table = table
                .entry(p.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("{key}: {p} is not a section")))?;
        }
        table.insert(last.to_string(), parsed);
        *self = root.try_into().map_err(|e: toml::de::Error| Error::Config(format!("{key}: {e}")))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one clock mode is required".into()));
        }
        if let Some(&r) = self.faults.rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::InvalidRate(r));
        }
        if self.input.size == 0 {
            return Err(Error::Config("input.size must be > 0".into()));
        }
        BernsteinCoeffs::new(self.circuit.bernstein)?;
        self.run_config(ClockMode::Sync).validate()
    }

    pub fn abs_diff_mode(&self) -> AbsDiffMode {
        match self.circuit.abs_diff {
            AbsDiffKind::Correlated => AbsDiffMode::Correlated,
            AbsDiffKind::Independent => AbsDiffMode::Independent,
            AbsDiffKind::Paired => AbsDiffMode::Paired {
                depth: self.circuit.pair_depth,
            },
        }
    }

    pub fn run_config(&self, mode: ClockMode) -> RunConfig {
        RunConfig {
            mode,
            length: self.stream.length,
            sync_period_ns: self.clock.sync_ns,
            min_period_ns: self.clock.min_ns,
            max_period_ns: self.clock.max_ns,
            spike_min_ns: self.stream.spike_min_ns,
            lfsr_width: self.lfsr.width,
            lfsr_taps: (!self.lfsr.taps.is_empty()).then(|| self.lfsr.taps.clone()),
            polarity: self.sng.polarity,
            cell: CellParams {
                abs_diff: self.abs_diff_mode(),
                window: self.circuit.window,
                comparator_states: self.circuit.comparator_states,
                history: self.circuit.kde.history,
                exp: self.circuit.exp,
            },
            coeffs: BernsteinCoeffs(self.circuit.bernstein),
            kde_threshold: self.circuit.kde.threshold,
            fault_rate: 0.0,
            keep_waveforms: false,
        }
    }

    /// Fault rates to sweep; a lone 0 when none are configured.
    pub fn rates(&self) -> Vec<f64> {
        if self.faults.rates.is_empty() {
            vec![0.0]
        } else {
            self.faults.rates.clone()
        }
    }

    pub fn load_inputs(&self) -> Result<CircuitInputs> {
        let kind = self.circuit.kind;
        let n = self.input.size;
        if kind == CircuitKind::Kde {
            if !self.input.frames.is_empty() {
                let current = self
                    .input
                    .current
                    .as_ref()
                    .ok_or_else(|| Error::Config("input.frames needs input.current".into()))?;
                let history = self
                    .input
                    .frames
                    .iter()
                    .map(Image::load_pgm)
                    .collect::<Result<Vec<_>>>()?;
                return Ok(CircuitInputs::Video(Video {
                    history,
                    current: Image::load_pgm(current)?,
                }));
            }
            return match self.input.synthetic.as_deref() {
                None | Some("video") => Ok(CircuitInputs::Video(synthetic::video(
                    n,
                    n,
                    self.circuit.kde.history,
                    self.input.seed,
                ))),
                Some(other) => Err(Error::Config(format!(
                    "background subtraction needs a video input, not {other:?}"
                ))),
            };
        }
        if let Some(p) = &self.input.image {
            return Ok(CircuitInputs::Image(Image::load_pgm(p)?));
        }
        let name = self.input.synthetic.as_deref().unwrap_or(match kind {
            CircuitKind::Robert => "scene",
            CircuitKind::Gamma => "ramp",
            _ => "halftone",
        });
        let img = match name {
            "ramp" => synthetic::ramp(n, n),
            "checkerboard" => synthetic::checkerboard(n, n, 4, 32, 224),
            "noise" => synthetic::noise(n, n, self.input.seed),
            "scene" => synthetic::scene(n, n),
            "halftone" => synthetic::halftone(n, n),
            other => return Err(Error::Config(format!("unknown synthetic input {other:?}"))),
        };
        Ok(CircuitInputs::Image(img))
    }
}
