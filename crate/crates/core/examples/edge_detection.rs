// Robert's cross edge detection on a cell array, synchronous against
// polysynchronous clocking.

use polysync::circuits::{run_array, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use polysync::metrics::{error_rate, oracle_robert, synthetic, Image};
use polysync::seeds::SeedTree;

fn ascii(img: &Image) -> String {
    const RAMP: &[u8] = b" .:-=+*#%@";
    let mut s = String::new();
    for r in 0..img.height() {
        for c in 0..img.width() {
            s.push(RAMP[img.get(r, c) as usize * (RAMP.len() - 1) / 255] as char);
        }
        s.push('\n');
    }
    s
}

pub fn run_example() -> polysync::Result<()> {
    let img = synthetic::scene(24, 24);
    let oracle = oracle_robert(&img);
    let inputs = CircuitInputs::Image(img);
    print!("reference edges:\n{}", ascii(&oracle));
    for mode in [ClockMode::Sync, ClockMode::Poly] {
        let cfg = RunConfig::default().with_mode(mode);
        let out = run_array(CircuitKind::Robert, &inputs, &cfg, SeedTree::new(3))?;
        let periods: Vec<f64> = out.clocks.iter().map(|c| c.period().as_ns()).collect();
        let (lo, hi) = periods.iter().fold((f64::MAX, f64::MIN), |(a, b), &p| (a.min(p), b.max(p)));
        println!(
            "{mode}: error {:.3}%, clock periods {lo:.3}..{hi:.3} ns",
            error_rate(&oracle, &out.image)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
