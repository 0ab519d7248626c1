// Local-mean thresholding: a 63-multiplexer tree averages an 8x8 window and
// a counter-based comparator decides each pixel.

use polysync::circuits::{run_array, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use polysync::metrics::{agreement, oracle_threshold, synthetic};
use polysync::seeds::SeedTree;

pub fn run_example() -> polysync::Result<()> {
    let page = synthetic::halftone(16, 16);
    let oracle = oracle_threshold(&page, 8);
    let inputs = CircuitInputs::Image(page);
    let mut outputs = Vec::new();
    for mode in [ClockMode::Sync, ClockMode::Poly] {
        let cfg = RunConfig::default().with_mode(mode);
        let out = run_array(CircuitKind::Threshold, &inputs, &cfg, SeedTree::new(4))?;
        println!("{mode}: {:.2}% of pixels match the reference", 100.0 * agreement(&oracle, &out.image)?);
        outputs.push(out.image);
    }
    println!("sync and poly agree on {:.2}% of pixels", 100.0 * agreement(&outputs[0], &outputs[1])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
