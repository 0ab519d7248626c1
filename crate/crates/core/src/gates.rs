//! Stochastic computational elements.
//!
//! Combinational elements (AND, MUX, XOR, ...) act pointwise on waveforms and
//! need no clock. Stateful elements sample every input at the rising edges of
//! the local clock they are bound to, update a small state machine, and hold
//! their output for one period. Before the first edge of a clock with a
//! nonzero phase they output the decision of their initial state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sng::ClockDomain;
use crate::waveform::Waveform;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
    /// Inputs `(a, b, sel)`.
    Mux,
    /// `2^levels` data inputs followed by `levels` select inputs.
    ScaledAddTree { levels: u32 },
    /// Inputs `(x, threshold)`.
    ComparatorFsm { states: u32 },
    /// Inputs `(d, decrement_gate)`.
    ExpFsm(ExpFsmParams),
    /// Inputs `(a, b)`; clocked pairing synchronizer followed by XOR.
    PairedAbsDiff { depth: u32 },
    /// `degree` data inputs followed by `degree + 1` coefficient inputs.
    Bernstein { degree: u32 },
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match *self {
            GateKind::Not => 1,
            GateKind::And | GateKind::Or | GateKind::Xor => 2,
            GateKind::Mux => 3,
            GateKind::ScaledAddTree { levels } => (1usize << levels) + levels as usize,
            GateKind::ComparatorFsm { .. } | GateKind::ExpFsm(_) => 2,
            GateKind::PairedAbsDiff { .. } => 2,
            GateKind::Bernstein { degree } => 2 * degree as usize + 1,
        }
    }

    /// Whether the element samples its inputs on a local clock.
    pub fn is_clocked(&self) -> bool {
        matches!(
            self,
            GateKind::ComparatorFsm { .. }
                | GateKind::ExpFsm(_)
                | GateKind::PairedAbsDiff { .. }
                | GateKind::Bernstein { .. }
        )
    }

    /// Evaluates the element on already-resolved input waveforms.
    pub fn eval(&self, inputs: &[&Waveform], clock: &ClockDomain) -> Result<Waveform> {
        if inputs.len() != self.arity() {
            return Err(Error::Arity {
                what: "gate inputs",
                expected: self.arity(),
                got: inputs.len(),
            });
        }
        match *self {
            GateKind::And => inputs[0].combine2(inputs[1], |a, b| a && b),
            GateKind::Or => inputs[0].combine2(inputs[1], |a, b| a || b),
            GateKind::Xor => inputs[0].combine2(inputs[1], |a, b| a ^ b),
            GateKind::Not => Ok(inputs[0].not()),
            GateKind::Mux => Waveform::mux(inputs[2], inputs[0], inputs[1]),
            GateKind::ScaledAddTree { levels } => {
                let n = 1usize << levels;
                scaled_add_tree(&inputs[..n], &inputs[n..])
            }
            GateKind::ComparatorFsm { states } => {
                comparator_fsm(inputs[0], inputs[1], clock, states)
            }
            GateKind::ExpFsm(p) => exp_fsm(inputs[0], inputs[1], clock, &p),
            GateKind::PairedAbsDiff { depth } => {
                abs_diff(inputs[0], inputs[1], AbsDiffMode::Paired { depth }, clock)
            }
            GateKind::Bernstein { degree } => {
                let d = degree as usize;
                bernstein_select(&inputs[..d], &inputs[d..], clock)
            }
        }
    }
}

/// Saturating up/down counter over `[0, state_count)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FsmState {
    state_count: u32,
    current: u32,
}

impl FsmState {
    pub fn new(state_count: u32, current: u32) -> Result<Self> {
        if state_count < 2 || current >= state_count {
            return Err(Error::Config(format!(
                "FSM with {state_count} states cannot start in state {current}"
            )));
        }
        Ok(FsmState {
            state_count,
            current,
        })
    }

    pub fn midpoint(state_count: u32) -> Result<Self> {
        FsmState::new(state_count, state_count / 2)
    }

    pub fn current(&self) -> u32 {
        self.current
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    pub fn up(&mut self) {
        if self.current + 1 < self.state_count {
            self.current += 1;
        }
    }

    pub fn down(&mut self) {
        self.current = self.current.saturating_sub(1);
    }
}

/// Samples every input at each edge of `clock`, feeds the row of bits to
/// `step`, and holds each result until the next edge.
fn clocked<F>(inputs: &[&Waveform], clock: &ClockDomain, before: bool, mut step: F) -> Result<Waveform>
where
    F: FnMut(&[bool]) -> bool,
{
    let columns = inputs
        .iter()
        .map(|w| clock.sample(w))
        .collect::<Result<Vec<_>>>()?;
    let mut row = vec![false; inputs.len()];
    let out: Vec<bool> = (0..clock.edge_count())
        .map(|k| {
            for (r, col) in row.iter_mut().zip(&columns) {
                *r = col[k];
            }
            step(&row)
        })
        .collect();
    clock.hold_after_edges(before, &out)
}

/// AND: the product of two independent streams.
pub fn stochastic_multiply(a: &Waveform, b: &Waveform) -> Result<Waveform> {
    a.combine2(b, |x, y| x && y)
}

/// MUX with `sel` choosing `b` when high: `(a + b) / 2` for a half-valued
/// independent select.
pub fn scaled_add(a: &Waveform, b: &Waveform, sel: &Waveform) -> Result<Waveform> {
    Waveform::mux(sel, a, b)
}

/// Balanced tree of `2^k - 1` multiplexers averaging `2^k` streams. Level `l`
/// (counted from the leaves) is driven by `selects[l]`.
pub fn scaled_add_tree(data: &[&Waveform], selects: &[&Waveform]) -> Result<Waveform> {
    let expected = 1usize << selects.len();
    if data.len() != expected {
        return Err(Error::Arity {
            what: "scaled-add tree data",
            expected,
            got: data.len(),
        });
    }
    let mut layer: Vec<Waveform> = data.iter().map(|w| (*w).clone()).collect();
    for sel in selects {
        layer = layer
            .chunks(2)
            .map(|pair| scaled_add(&pair[0], &pair[1], sel))
            .collect::<Result<_>>()?;
    }
    Ok(layer.pop().expect("tree has one root"))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsDiffMode {
    /// XOR of streams from one shared random source on one clock: exactly
    /// `|p_a - p_b|`.
    Correlated,
    /// XOR of independent streams: `p_a + p_b - 2 p_a p_b`.
    Independent,
    /// Both inputs sampled on the local clock, re-paired by a synchronizer of
    /// the given depth, then XORed. Close to `|p_a - p_b|` for independent
    /// inputs from any clock domain.
    Paired { depth: u32 },
}

/// `|a - b|` with the construction selected by `mode`. The clock is only used
/// by [`AbsDiffMode::Paired`].
pub fn abs_diff(a: &Waveform, b: &Waveform, mode: AbsDiffMode, clock: &ClockDomain) -> Result<Waveform> {
    match mode {
        AbsDiffMode::Correlated | AbsDiffMode::Independent => a.combine2(b, |x, y| x ^ y),
        AbsDiffMode::Paired { depth } => {
            let mut sync = PairingSynchronizer::new(depth);
            clocked(&[a, b], clock, false, |row| {
                let (x, y) = sync.step(row[0], row[1]);
                x ^ y
            })
        }
    }
}

/// Re-pairs the ones of two bit streams so they coincide as often as possible
/// without changing either stream's long-run density.
///
/// An unmatched `(1, 0)` is held back (output `(0, 0)`) and released together
/// with a later unmatched `(0, 1)` as `(1, 1)`. At most `depth` ones of one
/// stream are held at a time; beyond that they pass straight through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSynchronizer {
    depth: i32,
    /// Held ones of `a` when positive, of `b` when negative.
    balance: i32,
}

impl PairingSynchronizer {
    pub fn new(depth: u32) -> Self {
        PairingSynchronizer {
            depth: depth as i32,
            balance: 0,
        }
    }

    pub fn balance(&self) -> i32 {
        self.balance
    }

    pub fn step(&mut self, a: bool, b: bool) -> (bool, bool) {
        match (a, b) {
            (true, false) => {
                if self.balance < 0 {
                    self.balance += 1;
                    (true, true)
                } else if self.balance < self.depth {
                    self.balance += 1;
                    (false, false)
                } else {
                    (true, false)
                }
            }
            (false, true) => {
                if self.balance > 0 {
                    self.balance -= 1;
                    (true, true)
                } else if self.balance > -self.depth {
                    self.balance -= 1;
                    (false, false)
                } else {
                    (false, true)
                }
            }
            same => same,
        }
    }
}

/// Stochastic comparator: a saturating counter moving up on sampled `(1, 0)`
/// and down on `(0, 1)`, starting at the midpoint. Outputs 1 while the counter
/// is in the upper half, so the stream settles high when `p_x > p_t`.
pub fn comparator_fsm(x: &Waveform, t: &Waveform, clock: &ClockDomain, states: u32) -> Result<Waveform> {
    if states < 2 || !states.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "comparator needs an even state count >= 2, got {states}"
        )));
    }
    let mut fsm = FsmState::midpoint(states)?;
    let half = states / 2;
    clocked(&[x, t], clock, fsm.current() >= half, |row| {
        match (row[0], row[1]) {
            (true, false) => fsm.up(),
            (false, true) => fsm.down(),
            _ => {}
        }
        fsm.current() >= half
    })
}

/// Parameters of the exponential-decay FSM.
///
/// The counter moves up on a sampled 1 of `d`; on a sampled 0 it moves down
/// only when the decrement-gate stream (value `gate_probability`) is also
/// high. The output is 1 while the counter is at or below `threshold`. For a
/// two-state chain the long-run output is `(1-p) q / ((1-p) q + p)`, which with
/// `q = 3/16` tracks `exp(-4 p)` to within 0.03 on `[0, 1]`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpFsmParams {
    pub states: u32,
    pub threshold: u32,
    pub gate_probability: f64,
}

impl Default for ExpFsmParams {
    fn default() -> Self {
        ExpFsmParams {
            states: 2,
            threshold: 0,
            gate_probability: 0.1875,
        }
    }
}

impl ExpFsmParams {
    /// Long-run output probability for an i.i.d. input with density `p`,
    /// from the stationary distribution of the birth-death chain.
    pub fn stationary_output(&self, p: f64) -> f64 {
        let n = self.states as usize;
        let up = p;
        let down = (1.0 - p) * self.gate_probability;
        if up == 0.0 {
            return 1.0;
        }
        if down == 0.0 {
            return if self.threshold + 1 >= self.states { 1.0 } else { 0.0 };
        }
        let rho = up / down;
        let weights: Vec<f64> = (0..n).map(|i| rho.powi(i as i32)).collect();
        let total: f64 = weights.iter().sum();
        weights[..=self.threshold as usize].iter().sum::<f64>() / total
    }
}

/// Approximates `exp(-4 p_d)`; `gate` is the constant decrement-gate stream.
pub fn exp_fsm(d: &Waveform, gate: &Waveform, clock: &ClockDomain, params: &ExpFsmParams) -> Result<Waveform> {
    if params.threshold >= params.states {
        return Err(Error::Config(format!(
            "exp FSM threshold {} must be below state count {}",
            params.threshold, params.states
        )));
    }
    let mut fsm = FsmState::midpoint(params.states)?;
    let th = params.threshold;
    clocked(&[d, gate], clock, fsm.current() <= th, |row| {
        if row[0] {
            fsm.up();
        } else if row[1] {
            fsm.down();
        }
        fsm.current() <= th
    })
}

/// MUX-based Bernstein polynomial: on each edge the number of high inputs
/// among `xs` selects which coefficient stream's sampled bit is emitted.
pub fn bernstein_select(xs: &[&Waveform], coeffs: &[&Waveform], clock: &ClockDomain) -> Result<Waveform> {
    if coeffs.len() != xs.len() + 1 {
        return Err(Error::Arity {
            what: "Bernstein coefficients",
            expected: xs.len() + 1,
            got: coeffs.len(),
        });
    }
    let n = xs.len();
    let all: Vec<&Waveform> = xs.iter().chain(coeffs.iter()).copied().collect();
    clocked(&all, clock, false, |row| {
        let s = row[..n].iter().filter(|&&b| b).count();
        row[n + s]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sng::{Lfsr, SngConfig};
    use crate::time::Time;

    fn clock(period: f64, phase: f64, horizon: f64) -> ClockDomain {
        ClockDomain::new(Time::from_ns(period), Time::from_ns(phase), Time::from_ns(horizon)).unwrap()
    }

    fn stream(p: f64, seed: u32, c: &ClockDomain) -> Waveform {
        SngConfig::new(p, Lfsr::maximal(10, seed).unwrap(), *c)
            .unwrap()
            .generate_covering()
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let c = clock(2.0, 0.0, 2048.0);
        let a = stream(0.4, 17, &c);
        let one = Waveform::constant(true, c.horizon());
        assert_eq!(stochastic_multiply(&a, &one).unwrap(), a);
    }

    #[test]
    fn scaled_add_of_equal_inputs() {
        let c = clock(2.0, 0.0, 2048.0);
        let a = stream(0.4, 17, &c);
        let sel = stream(0.5, 99, &c);
        assert_eq!(scaled_add(&a, &a, &sel).unwrap(), a);
    }

    #[test]
    fn correlated_abs_diff_is_exact_over_one_period() {
        // Shared LFSR sequence, one clock: XOR is high exactly on the values
        // between the two thresholds.
        let c = clock(2.0, 0.0, 2046.0);
        let a = stream(0.6, 5, &c);
        let b = stream(0.4, 5, &c);
        let d = abs_diff(&a, &b, AbsDiffMode::Correlated, &c).unwrap();
        let qa = crate::sng::quantize(0.6, 10) as f64;
        let qb = crate::sng::quantize(0.4, 10) as f64;
        assert!((d.measure() - (qa - qb) / 1023.0).abs() < 1e-12);
        assert!((d.measure() - 0.2).abs() < 1e-3);
    }

    #[test]
    fn abs_diff_of_identical_streams_is_zero() {
        let c = clock(2.0, 0.3, 2048.0);
        let a = stream(0.7, 12, &c);
        for mode in [AbsDiffMode::Correlated, AbsDiffMode::Paired { depth: 8 }] {
            let d = abs_diff(&a, &a, mode, &c).unwrap();
            assert_eq!(d, Waveform::constant(false, c.horizon()));
        }
    }

    #[test]
    fn synchronizer_pairs_ones() {
        let mut s = PairingSynchronizer::new(1);
        assert_eq!(s.step(true, false), (false, false));
        assert_eq!(s.step(true, false), (true, false));
        assert_eq!(s.step(false, true), (true, true));
        assert_eq!(s.balance(), 0);
        assert_eq!(s.step(false, true), (false, false));
        assert_eq!(s.step(false, true), (false, true));
        assert_eq!(s.step(true, true), (true, true));
        assert_eq!(s.step(true, false), (true, true));
    }

    #[test]
    fn comparator_forced_saturation() {
        let c = clock(2.0, 0.0, 200.0);
        let one = Waveform::constant(true, c.horizon());
        let zero = Waveform::constant(false, c.horizon());
        let out = comparator_fsm(&one, &zero, &c, 32).unwrap();
        assert_eq!(out, one);
        let out = comparator_fsm(&zero, &one, &c, 32).unwrap();
        // One step down from the midpoint already leaves the upper half.
        assert_eq!(out, zero);
        assert!(comparator_fsm(&one, &zero, &c, 7).is_err());
    }

    #[test]
    fn comparator_with_same_stream_is_frozen() {
        let c = clock(2.0, 0.5, 2048.0);
        let x = stream(0.35, 77, &c);
        let out = comparator_fsm(&x, &x, &c, 32).unwrap();
        assert_eq!(out, Waveform::constant(true, c.horizon()));
    }

    #[test]
    fn exp_fsm_endpoints() {
        let c = clock(2.0, 0.0, 2048.0);
        let gate = stream(0.1875, 3, &c);
        let zero = Waveform::constant(false, c.horizon());
        let one = Waveform::constant(true, c.horizon());
        let p = ExpFsmParams::default();
        // Starts in state 1 (output 0) until the first gated decrement.
        let out = exp_fsm(&zero, &gate, &c, &p).unwrap();
        assert!(out.measure() > 0.98);
        assert_eq!(exp_fsm(&one, &gate, &c, &p).unwrap(), zero);
    }

    #[test]
    fn exp_stationary_formula() {
        let p = ExpFsmParams::default();
        for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let f = p.stationary_output(x);
            assert!((f - (-4.0 * x).exp()).abs() < 0.032, "{x}: {f}");
        }
    }

    #[test]
    fn bernstein_forced_selection() {
        let c = clock(2.0, 0.0, 2048.0);
        let zero = Waveform::constant(false, c.horizon());
        let one = Waveform::constant(true, c.horizon());
        let coeffs: Vec<Waveform> = (0..7).map(|k| stream(0.1 + 0.1 * k as f64, 40 + k, &c)).collect();
        let cr: Vec<&Waveform> = coeffs.iter().collect();
        let out = bernstein_select(&[&zero; 6], &cr, &c).unwrap();
        assert_eq!(out, coeffs[0]);
        let out = bernstein_select(&[&one; 6], &cr, &c).unwrap();
        assert_eq!(out, coeffs[6]);
        assert!(bernstein_select(&[&one; 6], &cr[..6], &c).is_err());
    }

    #[test]
    fn tree_arity_is_checked() {
        let c = clock(2.0, 0.0, 20.0);
        let z = Waveform::constant(false, c.horizon());
        assert!(scaled_add_tree(&[&z, &z, &z], &[&z]).is_err());
        assert_eq!(GateKind::ScaledAddTree { levels: 6 }.arity(), 70);
        assert_eq!(GateKind::Bernstein { degree: 6 }.arity(), 13);
    }

    #[test]
    fn fsm_state_saturates() {
        let mut s = FsmState::new(4, 3).unwrap();
        s.up();
        assert_eq!(s.current(), 3);
        for _ in 0..10 {
            s.down();
        }
        assert_eq!(s.current(), 0);
        assert!(FsmState::new(1, 0).is_err());
        assert!(FsmState::new(4, 4).is_err());
    }
}
