// Output error against soft-error rate for both clocking arms.

use polysync::circuits::{CellCircuit, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use polysync::faults::{plan_for_circuit, sweep};
use polysync::harness::summarize;
use polysync::metrics::synthetic;

pub fn run_example() -> polysync::Result<()> {
    let base = RunConfig::default();
    let cell = CellCircuit::new(CircuitKind::Robert, &base.cell)?;
    let plan = plan_for_circuit(&cell, 0.05, 0, base.lfsr_width)?;
    for (t, tap) in plan.taps().iter().enumerate() {
        let el = &cell.netlist().elements()[tap.element];
        println!(
            "tap {t}: {} {:?} on wire {:?}, flip probability {:.2} when enabled",
            el.name,
            tap.port,
            cell.netlist().wires()[tap.wire.0].name,
            plan.tap_probability(t)
        );
    }

    let inputs = CircuitInputs::Image(synthetic::scene(12, 12));
    let modes = [ClockMode::Sync, ClockMode::Poly];
    let out = sweep(CircuitKind::Robert, &inputs, &base, &modes, &[0.0, 0.05, 0.1, 0.2], 3, 42)?;
    for s in summarize(&out.rows, None) {
        println!(
            "{} rate {:.2}: {:.3}% +- {:.3}",
            s.mode, s.rate, s.mean_error_pct, s.stddev_error_pct
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
