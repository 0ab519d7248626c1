//! Stochastic number generation.
//!
//! An SNG compares a pseudo-random LFSR value against a quantized target on
//! every rising edge of its local clock and holds the resulting bit for one
//! period, so the fraction of time its output is high approximates the target.

mod clock;
mod lfsr;

pub use clock::{random_clock, ClockDomain};
pub use lfsr::{maximal_taps, Lfsr};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::Time;
use crate::waveform::Waveform;

/// Comparator direction between the LFSR value `r` and the threshold.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Emit 1 iff `r < threshold`; the stream encodes the target.
    #[default]
    Below,
    /// Emit 1 iff `r >= threshold`; the stream encodes `1 - target`.
    AtOrAbove,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SngConfig {
    target: f64,
    threshold: u32,
    lfsr: Lfsr,
    clock: ClockDomain,
    polarity: Polarity,
}

impl SngConfig {
    pub fn new(target: f64, lfsr: Lfsr, clock: ClockDomain) -> Result<Self> {
        if !(0.0..=1.0).contains(&target) {
            return Err(Error::Config(format!("SNG target {target} outside [0, 1]")));
        }
        let threshold = quantize(target, lfsr.width());
        Ok(SngConfig {
            target,
            threshold,
            lfsr,
            clock,
            polarity: Polarity::Below,
        })
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// `round(target * 2^width)`.
    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn quantized_target(&self) -> f64 {
        self.threshold as f64 / self.lfsr.range() as f64
    }

    pub fn clock(&self) -> &ClockDomain {
        &self.clock
    }

    pub fn lfsr(&self) -> &Lfsr {
        &self.lfsr
    }

    fn bit(&self, r: u32) -> bool {
        match self.polarity {
            Polarity::Below => r < self.threshold,
            Polarity::AtOrAbove => r >= self.threshold,
        }
    }

    /// The first `n` comparator outputs.
    pub fn bits(&self, n: usize) -> Vec<bool> {
        let mut l = self.lfsr.clone();
        (0..n).map(|_| self.bit(l.step())).collect()
    }

    /// A stream of exactly `length` bits starting at the first rising edge;
    /// the output is low before it. The waveform ends after the last bit, at
    /// `phase + length * period`.
    pub fn generate(&self, length: usize) -> Result<Waveform> {
        let (period, phase) = (self.clock.period(), self.clock.phase());
        let needed = phase + period * length as u64;
        if length == 0 || needed > self.clock.horizon() {
            return Err(Error::HorizonOverflow {
                needed,
                horizon: self.clock.horizon(),
            });
        }
        let lead = (phase > Time::ZERO).then_some((Time::ZERO, false));
        let bits = self.bits(length);
        let segs = lead.into_iter().chain(
            bits.into_iter()
                .enumerate()
                .map(|(k, b)| (phase + period * k as u64, b)),
        );
        Waveform::from_segments(needed, segs)
    }

    /// A stream covering the whole clock horizon, one bit per slot including
    /// the partial leading cycle.
    pub fn generate_covering(&self) -> Waveform {
        let bits = self.bits(self.clock.slot_count());
        self.clock
            .hold(&bits)
            .expect("slot count matches by construction")
    }
}

/// Nearest representable threshold to `target` for a `width`-bit source.
pub fn quantize(target: f64, width: u32) -> u32 {
    let full = (1u64 << width) as f64;
    (target.clamp(0.0, 1.0) * full).round() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock(period: f64, phase: f64, horizon: f64) -> ClockDomain {
        ClockDomain::new(
            Time::from_ns(period),
            Time::from_ns(phase),
            Time::from_ns(horizon),
        )
        .unwrap()
    }

    fn sng(target: f64, seed: u32) -> SngConfig {
        SngConfig::new(target, Lfsr::maximal(10, seed).unwrap(), clock(2.0, 0.0, 2048.0)).unwrap()
    }

    #[test]
    fn extreme_targets_are_constant() {
        let zero = sng(0.0, 3).generate(1024).unwrap();
        assert!(zero.is_constant() && !zero.initial_level());
        let one = sng(1.0, 3).generate(1024).unwrap();
        assert!(one.is_constant() && one.initial_level());
    }

    #[test]
    fn half_target_over_1024_bits() {
        for seed in [1, 100, 999] {
            let m = sng(0.5, seed).generate(1024).unwrap().measure();
            assert!((m - 512.0 / 1024.0).abs() <= 1.0 / 1024.0 + 1e-12, "{m}");
        }
    }

    #[test]
    fn quantization_error_bound() {
        for k in 0..=1000 {
            let t = k as f64 / 1000.0;
            let q = quantize(t, 10) as f64 / 1024.0;
            assert!((t - q).abs() <= 1.0 / 2048.0 + 1e-12);
        }
    }

    #[test]
    fn generate_is_deterministic() {
        let a = sng(0.37, 55).generate(1024).unwrap();
        let b = sng(0.37, 55).generate(1024).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn horizon_overflow() {
        let cfg = SngConfig::new(0.5, Lfsr::maximal(10, 1).unwrap(), clock(2.0, 1.0, 2048.0))
            .unwrap();
        assert!(matches!(cfg.generate(1024), Err(Error::HorizonOverflow { .. })));
        assert!(cfg.generate(1023).is_ok());
    }

    #[test]
    fn inverted_polarity_encodes_complement() {
        let a = sng(0.3, 21);
        let b = a.clone().with_polarity(Polarity::AtOrAbove);
        let wa = a.generate(1023).unwrap();
        let wb = b.generate(1023).unwrap();
        assert_eq!(wa.not(), wb);
    }

    #[test]
    fn covering_stream_fills_the_horizon() {
        let cfg = SngConfig::new(0.5, Lfsr::maximal(10, 9).unwrap(), clock(3.0, 1.3, 300.0))
            .unwrap();
        let w = cfg.generate_covering();
        assert_eq!(w.horizon(), Time::from_ns(300.0));
        assert_eq!(cfg.clock().slot_count(), 101);
    }
}
