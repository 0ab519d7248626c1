// Continuous-time signals: build, combine, filter and measure.

use polysync::{Time, Waveform};

pub fn run_example() -> polysync::Result<()> {
    let ns = Time::from_ns;
    let h = ns(10.0);

    // High on [1, 3) and [4, 5).
    let a = Waveform::new(false, vec![ns(1.0), ns(3.0), ns(4.0), ns(5.0)], h)?;
    // High on [2, 8).
    let b = Waveform::from_segments(h, [(Time::ZERO, false), (ns(2.0), true), (ns(8.0), false)])?;

    let and = a.combine2(&b, |x, y| x && y)?;
    let xor = a.combine2(&b, |x, y| x ^ y)?;
    println!("a   = {:.2}", a.measure());
    println!("b   = {:.2}", b.measure());
    println!("a&b = {:.2}", and.measure());
    println!("a^b = {:.2}", xor.measure());
    print!("a^b transitions:\n{}", xor.debug_dump());

    // A 0.15 ns glitch is removed, a 0.25 ns pulse survives.
    let glitchy = Waveform::new(false, vec![ns(2.0), ns(2.15), ns(6.0), ns(6.25)], h)?;
    let clean = glitchy.filter_spikes(ns(0.2));
    println!("glitchy {:.3} -> filtered {:.3}", glitchy.measure(), clean.measure());

    let bytes = xor.to_bytes();
    assert_eq!(Waveform::from_bytes(&bytes)?, xor);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
