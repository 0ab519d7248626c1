//! Exact simulation time.
//!
//! All instants are integer femtoseconds so that transitions compare exactly
//! and runs replay bit-for-bit. Clock periods of a few nanoseconds and the
//! 0.2 ns spike threshold are representable without rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FS_PER_NS: u64 = 1_000_000;

/// An instant or duration in femtoseconds.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Time(pub u64);

impl Time {
    pub const ZERO: Time = Time(0);

    pub const fn from_fs(fs: u64) -> Self {
        Time(fs)
    }

    /// Nearest femtosecond to `ns`. Negative and non-finite inputs clamp to zero.
    pub fn from_ns(ns: f64) -> Self {
        if !ns.is_finite() || ns <= 0.0 {
            return Time::ZERO;
        }
        Time((ns * FS_PER_NS as f64).round() as u64)
    }

    pub const fn fs(self) -> u64 {
        self.0
    }

    pub fn as_ns(self) -> f64 {
        self.0 as f64 / FS_PER_NS as f64
    }

    pub fn saturating_sub(self, rhs: Time) -> Time {
        Time(self.0.saturating_sub(rhs.0))
    }
}

impl Add for Time {
    type Output = Time;
    fn add(self, rhs: Time) -> Time {
        Time(self.0 + rhs.0)
    }
}

impl AddAssign for Time {
    fn add_assign(&mut self, rhs: Time) {
        self.0 += rhs.0;
    }
}

impl Sub for Time {
    type Output = Time;
    fn sub(self, rhs: Time) -> Time {
        Time(self.0 - rhs.0)
    }
}

impl Mul<u64> for Time {
    type Output = Time;
    fn mul(self, rhs: u64) -> Time {
        Time(self.0 * rhs)
    }
}

/// Formats as nanoseconds with femtosecond precision, e.g. `2.000000`.
impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:06}", self.0 / FS_PER_NS, self.0 % FS_PER_NS)
    }
}

/// Quantization grid for instants drawn from continuous distributions.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    resolution: Time,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            resolution: Time(1),
        }
    }
}

impl TimeGrid {
    pub fn new(resolution: Time) -> Result<Self> {
        if resolution == Time::ZERO {
            return Err(Error::InvalidClock("time grid resolution must be > 0".into()));
        }
        Ok(TimeGrid { resolution })
    }

    pub fn resolution(&self) -> Time {
        self.resolution
    }

    /// Rounds `t` to the nearest grid point.
    pub fn quantize(&self, t: Time) -> Time {
        let r = self.resolution.0;
        Time((t.0 + r / 2) / r * r)
    }

    pub fn quantize_ns(&self, ns: f64) -> Time {
        self.quantize(Time::from_ns(ns))
    }

    pub fn contains(&self, t: Time) -> bool {
        t.0.is_multiple_of(self.resolution.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_scale_values_are_exact() {
        assert_eq!(Time::from_ns(2.0).fs(), 2_000_000);
        assert_eq!(Time::from_ns(0.2).fs(), 200_000);
        assert_eq!(Time::from_ns(4.0) * 1024, Time::from_ns(4096.0));
    }

    #[test]
    fn display_is_fixed_point_ns() {
        assert_eq!(Time::from_ns(0.19).to_string(), "0.190000");
        assert_eq!(Time(2_000_001).to_string(), "2.000001");
    }

    #[test]
    fn grid_quantizes_to_multiples() {
        let g = TimeGrid::new(Time(1000)).unwrap();
        let t = g.quantize(Time(2_499));
        assert_eq!(t, Time(2_000));
        assert!(g.contains(t));
        assert_eq!(g.quantize(Time(2_500)), Time(3_000));
        assert!(TimeGrid::new(Time::ZERO).is_err());
    }
}
