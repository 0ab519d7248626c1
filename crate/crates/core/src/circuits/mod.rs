//! The four case-study circuits and the cell-array runner.
//!
//! A cell is a [`Netlist`] of elements from [`crate::gates`]; all of its
//! clocked elements share the cell's local clock. Streams produced by other
//! cells (neighbouring pixels) or by free-running sources (history frames,
//! polynomial coefficients in poly mode) arrive on their own clocks and pass
//! through the spike filter first.

mod array;
mod cells;
mod netlist;

pub use array::{run_array, ArrayOutput, CellArray, CircuitInputs, ClockMode, RunConfig};
pub use cells::{
    gamma_cell, kde_cell, robert_cell, threshold_cell, BernsteinCoeffs, CellCircuit, CellParams,
    CircuitKind, KdeDecision,
};
pub use netlist::{Element, Netlist, NetlistBuilder, Wire, WireId, WireSource};
