use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feedback taps (1-based bit positions, i.e. polynomial exponents) giving a
/// maximal-length sequence for widths 3 through 16.
pub fn maximal_taps(width: u32) -> Option<&'static [u32]> {
    Some(match width {
        3 => &[3, 2],
        4 => &[4, 3],
        5 => &[5, 3],
        6 => &[6, 5],
        7 => &[7, 6],
        8 => &[8, 6, 5, 4],
        9 => &[9, 5],
        10 => &[10, 7],
        11 => &[11, 9],
        12 => &[12, 6, 4, 1],
        13 => &[13, 4, 3, 1],
        14 => &[14, 5, 3, 1],
        15 => &[15, 14],
        16 => &[16, 15, 13, 4],
        _ => return None,
    })
}

/// Fibonacci linear feedback shift register.
///
/// Each step shifts left by one and feeds the XOR of the tapped bits into
/// bit 0. The register value after the shift is the step's output.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lfsr {
    width: u32,
    tap_mask: u32,
    state: u32,
}

impl Lfsr {
    pub const MAX_WIDTH: u32 = 24;

    pub fn new(width: u32, taps: &[u32], seed: u32) -> Result<Self> {
        if !(2..=Self::MAX_WIDTH).contains(&width) {
            return Err(Error::InvalidLfsr(format!(
                "width {width} outside 2..={}",
                Self::MAX_WIDTH
            )));
        }
        if taps.is_empty() || taps.iter().any(|&t| t == 0 || t > width) {
            return Err(Error::InvalidLfsr(format!(
                "taps {taps:?} must be non-empty positions in 1..={width}"
            )));
        }
        if !taps.contains(&width) {
            return Err(Error::InvalidLfsr(format!(
                "taps {taps:?} must include the top bit {width}"
            )));
        }
        let mask = Self::mask_for(width);
        if seed & mask == 0 {
            return Err(Error::InvalidLfsr("seed must be nonzero".into()));
        }
        let tap_mask = taps.iter().fold(0u32, |m, &t| m | (1 << (t - 1)));
        Ok(Lfsr {
            width,
            tap_mask,
            state: seed & mask,
        })
    }

    /// A register with the built-in maximal-length taps for `width`.
    pub fn maximal(width: u32, seed: u32) -> Result<Self> {
        let taps = maximal_taps(width)
            .ok_or_else(|| Error::InvalidLfsr(format!("no built-in taps for width {width}")))?;
        Lfsr::new(width, taps, seed)
    }

    fn mask_for(width: u32) -> u32 {
        (1u32 << width) - 1
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    pub fn taps(&self) -> Vec<u32> {
        (1..=self.width)
            .rev()
            .filter(|p| self.tap_mask & (1 << (p - 1)) != 0)
            .collect()
    }

    /// `2^width`, the number of representable comparator thresholds minus one.
    pub fn range(&self) -> u32 {
        1 << self.width
    }

    pub fn step(&mut self) -> u32 {
        let feedback = (self.state & self.tap_mask).count_ones() & 1;
        self.state = ((self.state << 1) | feedback) & Self::mask_for(self.width);
        self.state
    }

    /// Pure form of [`Lfsr::step`].
    pub fn stepped(&self) -> (Lfsr, u32) {
        let mut next = self.clone();
        let v = next.step();
        (next, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_length(mut l: Lfsr) -> u64 {
        let start = l.state();
        let mut n = 0;
        loop {
            l.step();
            n += 1;
            if l.state() == start || n > (1 << 20) {
                return n;
            }
        }
    }

    #[test]
    fn width3_enumerates_all_nonzero_values() {
        let mut l = Lfsr::new(3, &[3, 2], 0b001).unwrap();
        let mut seen: Vec<u32> = (0..7).map(|_| l.step()).collect();
        seen.sort_unstable();
        assert_eq!(seen, (1..=7).collect::<Vec<_>>());
    }

    #[test]
    fn width10_period_is_1023() {
        for seed in [1, 2, 345, 1023] {
            assert_eq!(cycle_length(Lfsr::maximal(10, seed).unwrap()), 1023);
        }
    }

    #[test]
    fn builtin_taps_are_maximal() {
        for w in 3..=16 {
            let l = Lfsr::maximal(w, 1).unwrap();
            assert_eq!(cycle_length(l), (1u64 << w) - 1, "width {w}");
        }
    }

    #[test]
    fn two_steps_are_not_identity() {
        let l = Lfsr::maximal(10, 77).unwrap();
        let (l1, _) = l.stepped();
        let (l2, _) = l1.stepped();
        assert_ne!(l2.state(), l.state());
    }

    #[test]
    fn construction_guards() {
        assert!(Lfsr::maximal(10, 0).is_err());
        assert!(Lfsr::maximal(10, 1024).is_err());
        assert!(Lfsr::new(10, &[7], 1).is_err());
        assert!(Lfsr::new(10, &[11, 10], 1).is_err());
        assert!(Lfsr::new(1, &[1], 1).is_err());
        assert_eq!(Lfsr::maximal(10, 5).unwrap().taps(), vec![10, 7]);
    }
}
