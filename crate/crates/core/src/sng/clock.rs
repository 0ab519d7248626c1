use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{Time, TimeGrid};
use crate::waveform::Waveform;

/// A free-running local clock: rising edges at `phase + k * period` below
/// `horizon`.
///
/// The clock is taken to have been running before `t = 0`, so when `phase > 0`
/// the interval `[0, phase)` is a partial cycle belonging to the edge at
/// `phase - period`. That partial cycle plus one slot per edge tile the whole
/// horizon; clocked sources emit one bit per slot.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClockDomain {
    period: Time,
    phase: Time,
    horizon: Time,
}

impl ClockDomain {
    pub fn new(period: Time, phase: Time, horizon: Time) -> Result<Self> {
        if period == Time::ZERO {
            return Err(Error::InvalidClock("period must be > 0".into()));
        }
        if phase >= period {
            return Err(Error::InvalidClock(format!(
                "phase {phase} must be below period {period}"
            )));
        }
        if horizon == Time::ZERO {
            return Err(Error::InvalidClock("horizon must be > 0".into()));
        }
        Ok(ClockDomain {
            period,
            phase,
            horizon,
        })
    }

    /// Zero-phase clock.
    pub fn synchronous(period: Time, horizon: Time) -> Result<Self> {
        ClockDomain::new(period, Time::ZERO, horizon)
    }

    pub fn period(&self) -> Time {
        self.period
    }

    pub fn phase(&self) -> Time {
        self.phase
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn with_horizon(&self, horizon: Time) -> Result<Self> {
        ClockDomain::new(self.period, self.phase, horizon)
    }

    pub fn edge_count(&self) -> usize {
        if self.phase >= self.horizon {
            0
        } else {
            ((self.horizon - self.phase).fs() - 1) as usize / self.period.fs() as usize + 1
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Time> + '_ {
        let (p, ph) = (self.period, self.phase);
        (0..self.edge_count() as u64).map(move |k| ph + p * k)
    }

    pub fn has_partial_cycle(&self) -> bool {
        self.phase > Time::ZERO
    }

    pub fn slot_count(&self) -> usize {
        self.edge_count() + self.has_partial_cycle() as usize
    }

    /// Start instants of every slot, beginning at zero.
    pub fn slot_starts(&self) -> impl Iterator<Item = Time> + '_ {
        let lead = self.has_partial_cycle().then_some(Time::ZERO);
        lead.into_iter().chain(self.edges())
    }

    /// Holds one level per slot (see [`ClockDomain::slot_count`]).
    pub fn hold(&self, levels: &[bool]) -> Result<Waveform> {
        if levels.len() != self.slot_count() {
            return Err(Error::Arity {
                what: "clocked levels",
                expected: self.slot_count(),
                got: levels.len(),
            });
        }
        Waveform::from_segments(self.horizon, self.slot_starts().zip(levels.iter().copied()))
    }

    /// Holds `before` over the partial leading cycle, then one level per edge.
    pub fn hold_after_edges(&self, before: bool, per_edge: &[bool]) -> Result<Waveform> {
        if per_edge.len() != self.edge_count() {
            return Err(Error::Arity {
                what: "per-edge levels",
                expected: self.edge_count(),
                got: per_edge.len(),
            });
        }
        let lead = self.has_partial_cycle().then_some((Time::ZERO, before));
        let segs = lead
            .into_iter()
            .chain(self.edges().zip(per_edge.iter().copied()));
        if self.edge_count() == 0 {
            return Ok(Waveform::constant(before, self.horizon));
        }
        Waveform::from_segments(self.horizon, segs)
    }

    /// Levels of `w` at every rising edge.
    pub fn sample(&self, w: &Waveform) -> Result<Vec<bool>> {
        if w.horizon() != self.horizon {
            return Err(Error::HorizonMismatch(self.horizon, w.horizon()));
        }
        Ok(w.sample_sorted(self.edges()))
    }
}

/// Draws a clock with period uniform on `[min_ns, max_ns]` and phase uniform
/// on `[0, period)`, both quantized to `grid`. Deterministic in `seed`.
pub fn random_clock(
    seed: u64,
    min_ns: f64,
    max_ns: f64,
    horizon: Time,
    grid: TimeGrid,
) -> Result<ClockDomain> {
    if !(min_ns.is_finite() && max_ns.is_finite()) || min_ns <= 0.0 || min_ns > max_ns {
        return Err(Error::InvalidClock(format!(
            "period range [{min_ns}, {max_ns}] ns is invalid"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period_ns = if min_ns == max_ns {
        min_ns
    } else {
        rng.random_range(min_ns..=max_ns)
    };
    let period = grid.quantize_ns(period_ns).max(grid.resolution());
    let raw_phase = Time(rng.random_range(0..period.fs()));
    let r = grid.resolution().fs();
    let phase = Time(raw_phase.fs() / r * r);
    ClockDomain::new(period, phase, horizon)
}
