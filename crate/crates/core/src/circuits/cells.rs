use serde::{Deserialize, Serialize};

use crate::circuits::netlist::{Netlist, NetlistBuilder, WireId};
use crate::error::{Error, Result};
use crate::gates::{
    abs_diff, bernstein_select, comparator_fsm, exp_fsm, scaled_add, scaled_add_tree, AbsDiffMode,
    ExpFsmParams, GateKind,
};
use crate::sng::ClockDomain;
use crate::waveform::Waveform;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitKind {
    Robert,
    Gamma,
    Threshold,
    Kde,
}

impl CircuitKind {
    pub const ALL: [CircuitKind; 4] = [
        CircuitKind::Robert,
        CircuitKind::Gamma,
        CircuitKind::Threshold,
        CircuitKind::Kde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::Robert => "robert",
            CircuitKind::Gamma => "gamma",
            CircuitKind::Threshold => "threshold",
            CircuitKind::Kde => "kde",
        }
    }

    /// Whether outputs are binary decisions rather than intensities.
    pub fn is_binary(self) -> bool {
        matches!(self, CircuitKind::Threshold | CircuitKind::Kde)
    }
}

impl std::fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CircuitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CircuitKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown circuit kind {s:?}")))
    }
}

/// Coefficients of the degree-6 Bernstein polynomial approximating
/// `x^0.45`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinCoeffs(pub [f64; 7]);

impl Default for BernsteinCoeffs {
    fn default() -> Self {
        BernsteinCoeffs([0.0955, 0.7207, 0.3476, 0.9988, 0.7017, 0.9695, 0.9939])
    }
}

impl BernsteinCoeffs {
    pub fn new(b: [f64; 7]) -> Result<Self> {
        if b.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Config(format!("Bernstein coefficients {b:?} outside [0, 1]")));
        }
        Ok(BernsteinCoeffs(b))
    }

    /// `sum b_i C(6, i) x^i (1 - x)^(6 - i)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        const BINOM: [f64; 7] = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];
        (0..7)
            .map(|i| self.0[i] * BINOM[i] * x.powi(i as i32) * (1.0 - x).powi(6 - i as i32))
            .sum()
    }
}

/// Structural parameters shared by all cells of an array.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub abs_diff: AbsDiffMode,
    /// Side of the square thresholding window; `side^2` must be a power of two.
    pub window: usize,
    pub comparator_states: u32,
    pub history: usize,
    pub exp: ExpFsmParams,
}

impl Default for CellParams {
    fn default() -> Self {
        CellParams {
            abs_diff: AbsDiffMode::Paired { depth: 16 },
            window: 8,
            comparator_states: 32,
            history: 32,
            exp: ExpFsmParams::default(),
        }
    }
}

fn tree_levels(n: usize, what: &'static str) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Config(format!("{what}: {n} is not a power of two >= 2")));
    }
    Ok(n.trailing_zeros())
}

/// One processing cell as a gate graph over its external input streams.
///
/// External input order:
/// - robert: `r00, r11, r01, r10, sel`
/// - gamma: `x0..x5, b0..b6`
/// - threshold: `w0..w63` row-major window, then the tree selects
/// - kde: `x_t, h0..h31`, the tree selects, then the decrement gate
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellCircuit {
    kind: CircuitKind,
    netlist: Netlist,
    /// Index of the window input compared against the local mean.
    center: Option<usize>,
}

impl CellCircuit {
    pub fn new(kind: CircuitKind, params: &CellParams) -> Result<Self> {
        match kind {
            CircuitKind::Robert => Self::robert(params.abs_diff),
            CircuitKind::Gamma => Self::gamma(),
            CircuitKind::Threshold => Self::threshold(params.window, params.comparator_states),
            CircuitKind::Kde => Self::kde(params.history, params.abs_diff, params.exp),
        }
    }

    fn abs_gate(mode: AbsDiffMode) -> GateKind {
        match mode {
            AbsDiffMode::Paired { depth } => GateKind::PairedAbsDiff { depth },
            AbsDiffMode::Correlated | AbsDiffMode::Independent => GateKind::Xor,
        }
    }

    pub fn robert(mode: AbsDiffMode) -> Result<Self> {
        let mut b = NetlistBuilder::new();
        let [r00, r11, r01, r10, sel] = ["r00", "r11", "r01", "r10", "sel"].map(|n| b.input(n));
        let d0 = b.gate("absdiff_main", Self::abs_gate(mode), &[r00, r11])?;
        let d1 = b.gate("absdiff_anti", Self::abs_gate(mode), &[r01, r10])?;
        let y = b.gate("add", GateKind::Mux, &[d0, d1, sel])?;
        Ok(CellCircuit {
            kind: CircuitKind::Robert,
            netlist: b.finish(y)?,
            center: None,
        })
    }

    pub fn gamma() -> Result<Self> {
        let mut b = NetlistBuilder::new();
        let mut ins: Vec<WireId> = (0..6).map(|i| b.input(format!("x{i}"))).collect();
        ins.extend((0..7).map(|i| b.input(format!("b{i}"))));
        let y = b.gate("bernstein", GateKind::Bernstein { degree: 6 }, &ins)?;
        Ok(CellCircuit {
            kind: CircuitKind::Gamma,
            netlist: b.finish(y)?,
            center: None,
        })
    }

    pub fn threshold(window: usize, comparator_states: u32) -> Result<Self> {
        let levels = tree_levels(window * window, "threshold window area")?;
        let mut b = NetlistBuilder::new();
        let data: Vec<WireId> = (0..window * window)
            .map(|i| b.input(format!("w{}_{}", i / window, i % window)))
            .collect();
        let sels: Vec<WireId> = (0..levels).map(|l| b.input(format!("sel{l}"))).collect();
        let mean = mux_tree(&mut b, data.clone(), &sels, "mean")?;
        let center = (window / 2) * window + window / 2;
        let y = b.gate(
            "compare",
            GateKind::ComparatorFsm {
                states: comparator_states,
            },
            &[data[center], mean],
        )?;
        Ok(CellCircuit {
            kind: CircuitKind::Threshold,
            netlist: b.finish(y)?,
            center: Some(center),
        })
    }

    pub fn kde(history: usize, mode: AbsDiffMode, exp: ExpFsmParams) -> Result<Self> {
        let levels = tree_levels(history, "KDE history length")?;
        let mut b = NetlistBuilder::new();
        let x = b.input("x_t");
        let hist: Vec<WireId> = (0..history).map(|i| b.input(format!("h{i}"))).collect();
        let sels: Vec<WireId> = (0..levels).map(|l| b.input(format!("sel{l}"))).collect();
        let gate = b.input("gate");
        let mut kernels = Vec::with_capacity(history);
        for (i, &h) in hist.iter().enumerate() {
            let d = b.gate(format!("absdiff{i}"), Self::abs_gate(mode), &[x, h])?;
            kernels.push(b.gate(format!("exp{i}"), GateKind::ExpFsm(exp), &[d, gate])?);
        }
        let pdf = mux_tree(&mut b, kernels, &sels, "pdf")?;
        Ok(CellCircuit {
            kind: CircuitKind::Kde,
            netlist: b.finish(pdf)?,
            center: None,
        })
    }

    pub fn kind(&self) -> CircuitKind {
        self.kind
    }

    pub fn netlist(&self) -> &Netlist {
        &self.netlist
    }

    pub fn input_count(&self) -> usize {
        self.netlist.inputs().len()
    }

    /// Window input index of the compared pixel (threshold cells only).
    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn evaluate(
        &self,
        inputs: &[&Waveform],
        clock: &ClockDomain,
        errors: Option<&[Option<Waveform>]>,
    ) -> Result<Waveform> {
        self.netlist.evaluate(inputs, clock, errors)
    }
}

fn mux_tree(b: &mut NetlistBuilder, mut layer: Vec<WireId>, sels: &[WireId], name: &str) -> Result<WireId> {
    for (l, &s) in sels.iter().enumerate() {
        layer = layer
            .chunks(2)
            .enumerate()
            .map(|(k, pair)| b.gate(format!("{name}_mux{l}_{k}"), GateKind::Mux, &[pair[0], pair[1], s]))
            .collect::<Result<_>>()?;
    }
    Ok(layer[0])
}

fn expect_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Arity { what, expected, got });
    }
    Ok(())
}

/// `0.5 * (|r00 - r11| + |r01 - r10|)` as two absolute differences feeding a
/// scaled adder.
pub fn robert_cell(
    r00: &Waveform,
    r11: &Waveform,
    r01: &Waveform,
    r10: &Waveform,
    sel: &Waveform,
    mode: AbsDiffMode,
    clock: &ClockDomain,
) -> Result<Waveform> {
    let d0 = abs_diff(r00, r11, mode, clock)?;
    let d1 = abs_diff(r01, r10, mode, clock)?;
    scaled_add(&d0, &d1, sel)
}

/// Degree-6 Bernstein polynomial of six independent copies of `x`.
pub fn gamma_cell(xs: &[&Waveform], coeffs: &[&Waveform], clock: &ClockDomain) -> Result<Waveform> {
    expect_len("gamma x streams", 6, xs.len())?;
    expect_len("gamma coefficient streams", 7, coeffs.len())?;
    bernstein_select(xs, coeffs, clock)
}

/// Decision stream that settles high when `center` is at or above the
/// scaled-add average of `window`.
pub fn threshold_cell(
    window: &[&Waveform],
    center: &Waveform,
    selects: &[&Waveform],
    clock: &ClockDomain,
    states: u32,
) -> Result<Waveform> {
    expect_len("threshold window streams", 64, window.len())?;
    expect_len("threshold tree selects", 6, selects.len())?;
    let mean = scaled_add_tree(window, selects)?;
    comparator_fsm(center, &mean, clock, states)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KdeDecision {
    pub pdf: Waveform,
    pub estimate: f64,
    pub background: bool,
}

/// Estimates `(1/n) sum exp(-4 |x_t - h_i|)` as a stream and classifies the
/// pixel as background when the estimate falls below `threshold`.
#[allow(clippy::too_many_arguments)]
pub fn kde_cell(
    x_t: &Waveform,
    history: &[&Waveform],
    selects: &[&Waveform],
    gate: &Waveform,
    clock: &ClockDomain,
    mode: AbsDiffMode,
    params: &ExpFsmParams,
    threshold: f64,
) -> Result<KdeDecision> {
    expect_len("KDE history streams", 32, history.len())?;
    let kernels = history
        .iter()
        .map(|h| exp_fsm(&abs_diff(x_t, h, mode, clock)?, gate, clock, params))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Waveform> = kernels.iter().collect();
    let pdf = scaled_add_tree(&refs, selects)?;
    let estimate = pdf.measure();
    Ok(KdeDecision {
        pdf,
        estimate,
        background: estimate < threshold,
    })
}
