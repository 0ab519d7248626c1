// Hand-built gate graph: a clocked absolute difference feeding a scaled
// adder, evaluated on one local clock with and without soft errors.

use polysync::circuits::NetlistBuilder;
use polysync::faults::plan_for_netlist;
use polysync::gates::GateKind;
use polysync::seeds::SeedTree;
use polysync::sng::{ClockDomain, Lfsr, SngConfig};
use polysync::{Time, Waveform};

pub fn run_example() -> polysync::Result<()> {
    let mut b = NetlistBuilder::new();
    let x = b.input("x");
    let y = b.input("y");
    let z = b.input("z");
    let sel = b.input("sel");
    let d = b.gate("absdiff", GateKind::PairedAbsDiff { depth: 16 }, &[x, y])?;
    let out = b.gate("add", GateKind::Mux, &[d, z, sel])?;
    let net = b.finish(out)?;

    let clock = ClockDomain::new(Time::from_ns(2.5), Time::from_ns(0.7), Time::from_ns(2.5) * 1025)?;
    // Adjacent register seeds give nearly identical sequences; spread them out.
    let stream = |p: f64, label: u64| -> polysync::Result<Waveform> {
        let seed = SeedTree::new(label).lfsr_seed(10);
        Ok(SngConfig::new(p, Lfsr::maximal(10, seed)?, clock)?.generate_covering())
    };
    let ins = [stream(0.8, 1)?, stream(0.3, 2)?, stream(0.2, 3)?, stream(0.5, 4)?];
    let refs: Vec<&Waveform> = ins.iter().collect();
    let clean = net.evaluate(&refs, &clock, None)?;
    println!("(|0.8 - 0.3| + 0.2) / 2 = {:.4} (exact 0.35)", clean.measure());

    let plan = plan_for_netlist(&net, 0.1, 9, 10)?;
    println!("{} taps over {} wires", plan.taps().len(), net.wires().len());
    let faulty = net.evaluate(&refs, &clock, Some(&plan.error_waveforms(&clock)?))?;
    println!("with 10% soft errors: {:.4}", faulty.measure());
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysync::Result<()> {
    run_example()
}
