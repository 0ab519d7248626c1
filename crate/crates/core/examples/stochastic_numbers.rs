// Stochastic number generators on unsynchronized clocks, and the two basic
// operations: AND multiplies, a MUX with a half-valued select averages.

use polysync::gates::{scaled_add, stochastic_multiply};
use polysync::seeds::SeedTree;
use polysync::sng::{random_clock, Lfsr, SngConfig};
use polysync::time::TimeGrid;
use polysync::{Time, Waveform};

fn sng(value: f64, seed: u64, horizon: Time) -> polysync::Result<(Waveform, f64)> {
    let clock = random_clock(seed, 2.0, 4.0, horizon, TimeGrid::default())?;
    let lfsr = Lfsr::maximal(10, SeedTree::new(seed).lfsr_seed(10))?;
    let cfg = SngConfig::new(value, lfsr, clock)?;
    Ok((cfg.generate_covering(), clock.period().as_ns()))
}

pub fn run_example() -> polysync::Result<()> {
    let horizon = Time::from_ns(4.0) * 1024;

    let (a, pa) = sng(0.6, 1, horizon)?;
    let (b, pb) = sng(0.5, 2, horizon)?;
    let product = stochastic_multiply(&a, &b)?;
    println!(
        "0.6 (period {pa:.3} ns) x 0.5 (period {pb:.3} ns) = {:.4}",
        product.measure()
    );

    let (x, _) = sng(0.25, 3, horizon)?;
    let (y, _) = sng(0.5, 4, horizon)?;
    let (sel, _) = sng(0.5, 5, horizon)?;
    let sum = scaled_add(&x, &y, &sel)?;
    println!("(0.25 + 0.5) / 2 = {:.4}", sum.measure());
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
