// Gamma correction with a degree-6 Bernstein polynomial, compared both to
// the polynomial itself and to the ideal power curve it approximates.

use polysync::circuits::{run_array, BernsteinCoeffs, CircuitInputs, CircuitKind, ClockMode, RunConfig};
use polysync::metrics::{error_rate, oracle_gamma, oracle_gamma_ideal, synthetic};
use polysync::seeds::SeedTree;

pub fn run_example() -> polysync::Result<()> {
    let coeffs = BernsteinCoeffs::default();
    for x in [0.0, 0.1, 0.25, 0.5, 0.75, 1.0] {
        println!("x={x:.2}  poly={:.4}  x^0.45={:.4}", coeffs.evaluate(x), f64::powf(x, 0.45));
    }
    let ramp = synthetic::ramp(32, 4);
    let inputs = CircuitInputs::Image(ramp.clone());
    let poly = oracle_gamma(&ramp, &coeffs);
    let ideal = oracle_gamma_ideal(&ramp);
    println!("polynomial vs ideal: {:.3}%", error_rate(&ideal, &poly)?);
    for mode in [ClockMode::Sync, ClockMode::Poly] {
        let cfg = RunConfig::default().with_mode(mode);
        let out = run_array(CircuitKind::Gamma, &inputs, &cfg, SeedTree::new(8))?;
        println!(
            "{mode}: vs polynomial {:.3}%, vs ideal {:.3}%",
            error_rate(&poly, &out.image)?,
            error_rate(&ideal, &out.image)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
