//! Continuous-time simulation of polysynchronous stochastic circuits.
//!
//! Values in `[0, 1]` are carried by binary [`Waveform`]s and read back as the
//! fraction of time the signal is high. Every circuit cell may run on its own
//! unsynchronized local clock; stateful elements sample their inputs on that
//! clock while combinational gates act pointwise in continuous time.
//!
//! The crate is organised bottom-up:
//!
//! - [`time`] and [`waveform`]: exact femtosecond time and the signal algebra.
//! - [`sng`]: LFSRs, clock domains and stochastic number generators.
//! - [`gates`]: combinational operators and clocked FSM elements.
//! - [`circuits`]: the Robert's cross, gamma, mean-threshold and KDE cells,
//!   their netlists and the cell-array runner.
//! - [`faults`]: XOR-tap soft-error injection and rate sweeps.
//! - [`metrics`]: images, golden software references and the error metric.
//! - [`harness`]: trial orchestration, configuration and report files.

pub mod circuits;
pub mod error;
pub mod faults;
pub mod gates;
pub mod harness;
pub mod metrics;
pub mod seeds;
pub mod sng;
pub mod time;
pub mod waveform;

pub use error::{Error, Result};
pub use time::Time;
pub use waveform::Waveform;
