//! Piecewise-constant binary signals over continuous time.
//!
//! A [`Waveform`] is an initial level, a strictly increasing list of toggle
//! instants inside `(0, horizon)`, and the horizon itself. The level at `t` is
//! the initial level XOR the parity of the number of toggles at or before `t`,
//! so a toggle "happens first" when something samples at the same instant.
//!
//! Gates are ideal: combining waveforms evaluates the boolean function at
//! every instant where any input toggles and keeps only the instants where the
//! result actually changes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::time::Time;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Waveform {
    initial: bool,
    transitions: Vec<Time>,
    horizon: Time,
}

impl Waveform {
    pub fn new(initial: bool, transitions: Vec<Time>, horizon: Time) -> Result<Self> {
        if horizon == Time::ZERO {
            return Err(Error::InvalidWaveform("horizon must be > 0".into()));
        }
        if let Some(&first) = transitions.first() {
            if first == Time::ZERO {
                return Err(Error::InvalidWaveform("transition at t = 0".into()));
            }
        }
        if let Some(&last) = transitions.last() {
            if last >= horizon {
                return Err(Error::InvalidWaveform(format!(
                    "transition at {last} not before horizon {horizon}"
                )));
            }
        }
        if transitions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWaveform(
                "transitions must be strictly increasing".into(),
            ));
        }
        Ok(Waveform {
            initial,
            transitions,
            horizon,
        })
    }

    pub fn constant(level: bool, horizon: Time) -> Self {
        assert!(horizon > Time::ZERO, "horizon must be > 0");
        Waveform {
            initial: level,
            transitions: Vec::new(),
            horizon,
        }
    }

    /// Builds a waveform from consecutive segments `(start, level)`; the first
    /// segment starts at zero and each one lasts until the next start (the
    /// last until `horizon`). Equal neighbouring levels are coalesced.
    pub fn from_segments<I>(horizon: Time, segments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Time, bool)>,
    {
        let mut iter = segments.into_iter();
        let (start, initial) = iter
            .next()
            .ok_or_else(|| Error::InvalidWaveform("no segments".into()))?;
        if start != Time::ZERO {
            return Err(Error::InvalidWaveform("first segment must start at 0".into()));
        }
        let mut level = initial;
        let mut prev = start;
        let mut transitions = Vec::new();
        for (t, l) in iter {
            if t <= prev {
                return Err(Error::InvalidWaveform("segment starts must increase".into()));
            }
            if t >= horizon {
                break;
            }
            prev = t;
            if l != level {
                transitions.push(t);
                level = l;
            }
        }
        Waveform::new(initial, transitions, horizon)
    }

    pub fn initial_level(&self) -> bool {
        self.initial
    }

    pub fn transitions(&self) -> &[Time] {
        &self.transitions
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn final_level(&self) -> bool {
        self.initial ^ (self.transitions.len() % 2 == 1)
    }

    pub fn is_constant(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Level at `t`, with a toggle at exactly `t` already applied.
    pub fn level_at(&self, t: Time) -> bool {
        let toggles = self.transitions.partition_point(|&x| x <= t);
        self.initial ^ (toggles % 2 == 1)
    }

    /// Total time spent high.
    pub fn high_time(&self) -> Time {
        let mut level = self.initial;
        let mut last = Time::ZERO;
        let mut high = 0u64;
        for &t in &self.transitions {
            if level {
                high += (t - last).fs();
            }
            last = t;
            level = !level;
        }
        if level {
            high += (self.horizon - last).fs();
        }
        Time(high)
    }

    /// Fraction of the horizon spent high: the value the waveform encodes.
    pub fn measure(&self) -> f64 {
        self.high_time().fs() as f64 / self.horizon.fs() as f64
    }

    pub fn not(&self) -> Waveform {
        Waveform {
            initial: !self.initial,
            transitions: self.transitions.clone(),
            horizon: self.horizon,
        }
    }

    /// Pointwise `f(a(t), b(t))`.
    pub fn combine2<F>(&self, other: &Waveform, f: F) -> Result<Waveform>
    where
        F: Fn(bool, bool) -> bool,
    {
        merge_map([self, other], |[a, b]| f(a, b))
    }

    /// Pointwise multiplexer: `a(t)` where `sel(t)` is low, `b(t)` where high.
    pub fn mux(sel: &Waveform, a: &Waveform, b: &Waveform) -> Result<Waveform> {
        merge_map([sel, a, b], |[s, a, b]| if s { b } else { a })
    }

    /// Left fold of `combine2` over `inputs` in the given order.
    pub fn fold<F>(inputs: &[&Waveform], f: F) -> Result<Waveform>
    where
        F: Fn(bool, bool) -> bool,
    {
        let (first, rest) = inputs
            .split_first()
            .ok_or_else(|| Error::InvalidWaveform("fold over no inputs".into()))?;
        let mut acc = (*first).clone();
        for w in rest {
            acc = acc.combine2(w, &f)?;
        }
        Ok(acc)
    }

    /// Forces every maximal high interval strictly shorter than `min_width`
    /// low. Low intervals are untouched, so the operation is idempotent and
    /// never increases the measure.
    pub fn filter_spikes(&self, min_width: Time) -> Waveform {
        if min_width == Time::ZERO || self.transitions.is_empty() {
            if min_width > Time::ZERO && self.initial && self.horizon < min_width {
                return Waveform::constant(false, self.horizon);
            }
            return self.clone();
        }
        // Boundaries of the segments: 0, t1, ..., tn, horizon.
        let n = self.transitions.len();
        let bound = |k: usize| -> Time {
            if k == 0 {
                Time::ZERO
            } else if k <= n {
                self.transitions[k - 1]
            } else {
                self.horizon
            }
        };
        let mut initial = None;
        let mut level = false;
        let mut out = Vec::with_capacity(n);
        for seg in 0..=n {
            let seg_level = self.initial ^ (seg % 2 == 1);
            let keep = !seg_level || bound(seg + 1) - bound(seg) >= min_width;
            let l = seg_level && keep;
            match initial {
                None => {
                    initial = Some(l);
                    level = l;
                }
                Some(_) if l != level => {
                    out.push(bound(seg));
                    level = l;
                }
                Some(_) => {}
            }
        }
        Waveform {
            initial: initial.unwrap_or(false),
            transitions: out,
            horizon: self.horizon,
        }
    }

    /// Levels at ascending instants in `[0, horizon)`.
    pub fn sample(&self, edges: &[Time]) -> Result<Vec<bool>> {
        for w in edges.windows(2) {
            if w[0] > w[1] {
                return Err(Error::InvalidWaveform("sample edges must ascend".into()));
            }
        }
        if let Some(&last) = edges.last() {
            if last >= self.horizon {
                return Err(Error::SampleOutOfRange {
                    at: last,
                    horizon: self.horizon,
                });
            }
        }
        Ok(self.sample_sorted(edges.iter().copied()))
    }

    /// Unchecked sampling for callers that already guarantee ascending,
    /// in-range instants (clock edges).
    pub(crate) fn sample_sorted<I>(&self, edges: I) -> Vec<bool>
    where
        I: IntoIterator<Item = Time>,
    {
        let mut idx = 0;
        let tr = &self.transitions;
        edges
            .into_iter()
            .map(|t| {
                while idx < tr.len() && tr[idx] <= t {
                    idx += 1;
                }
                self.initial ^ (idx % 2 == 1)
            })
            .collect()
    }

    /// Human-readable dump: one `t=<ns> level=<0|1>` line for the initial
    /// level and each transition.
    pub fn debug_dump(&self) -> String {
        let mut s = String::new();
        let mut level = self.initial;
        let _ = writeln!(s, "t={} level={}", Time::ZERO, level as u8);
        for &t in &self.transitions {
            level = !level;
            let _ = writeln!(s, "t={} level={}", t, level as u8);
        }
        s
    }

    /// Little-endian binary form: `u64` transition count, the transition
    /// instants as `u64` femtoseconds, one initial-level byte, `u64` horizon.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(17 + 8 * self.transitions.len());
        out.extend_from_slice(&(self.transitions.len() as u64).to_le_bytes());
        for t in &self.transitions {
            out.extend_from_slice(&t.fs().to_le_bytes());
        }
        out.push(self.initial as u8);
        out.extend_from_slice(&self.horizon.fs().to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidWaveform(format!("binary form: {m}"));
        let read_u64 = |at: usize| -> Result<u64> {
            bytes
                .get(at..at + 8)
                .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
                .ok_or_else(|| bad("truncated"))
        };
        let count = read_u64(0)? as usize;
        let body = count
            .checked_mul(8)
            .and_then(|n| n.checked_add(8))
            .ok_or_else(|| bad("count overflow"))?;
        if bytes.len() != body + 9 {
            return Err(bad("length does not match transition count"));
        }
        let transitions = (0..count)
            .map(|i| read_u64(8 + 8 * i).map(Time))
            .collect::<Result<Vec<_>>>()?;
        let initial = match bytes[body] {
            0 => false,
            1 => true,
            _ => return Err(bad("initial level byte must be 0 or 1")),
        };
        let horizon = Time(read_u64(body + 1)?);
        Waveform::new(initial, transitions, horizon)
    }
}

/// Evaluates `f` over the merged transition sets of `N` equal-horizon inputs.
fn merge_map<const N: usize, F>(inputs: [&Waveform; N], f: F) -> Result<Waveform>
where
    F: Fn([bool; N]) -> bool,
{
    let horizon = inputs[0].horizon;
    for w in &inputs[1..] {
        if w.horizon != horizon {
            return Err(Error::HorizonMismatch(horizon, w.horizon));
        }
    }
    let mut idx = [0usize; N];
    let mut levels: [bool; N] = std::array::from_fn(|k| inputs[k].initial);
    let initial = f(levels);
    let mut current = initial;
    let cap = inputs.iter().map(|w| w.transitions.len()).max().unwrap_or(0);
    let mut out = Vec::with_capacity(cap);
    loop {
        let mut next: Option<Time> = None;
        for k in 0..N {
            if let Some(&t) = inputs[k].transitions.get(idx[k]) {
                next = Some(next.map_or(t, |n| n.min(t)));
            }
        }
        let Some(t) = next else { break };
        for k in 0..N {
            if inputs[k].transitions.get(idx[k]) == Some(&t) {
                levels[k] = !levels[k];
                idx[k] += 1;
            }
        }
        let v = f(levels);
        if v != current {
            out.push(t);
            current = v;
        }
    }
    Ok(Waveform {
        initial,
        transitions: out,
        horizon,
    })
}
