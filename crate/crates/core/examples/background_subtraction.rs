// Kernel-density background subtraction over 32 history frames.

use polysync::circuits::{run_array, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use polysync::metrics::{error_rate, kde_pdf, synthetic};
use polysync::seeds::SeedTree;

pub fn run_example() -> polysync::Result<()> {
    let video = synthetic::video(12, 12, 32, 1);
    let pdf = kde_pdf(&video.history, &video.current)?;
    let inputs = CircuitInputs::Video(video);
    let cfg = RunConfig::default().with_mode(ClockMode::Poly);
    let oracle = inputs.oracle(CircuitKind::Kde, &cfg)?;
    let out = run_array(CircuitKind::Kde, &inputs, &cfg, SeedTree::new(6))?;
    let worst = pdf
        .iter()
        .zip(&out.estimates)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("worst |estimate - exact density| = {worst:.3}");
    println!("classification error vs reference: {:.3}%", error_rate(&oracle, &out.image)?);
    for r in 0..out.image.height() {
        let row: String = (0..out.image.width())
            .map(|c| if out.image.get(r, c) == 0 { '#' } else { '.' })
            .collect();
        println!("{row}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
