use polysync::circuits::{run_array, CellCircuit, CircuitInputs, CircuitKind, RunConfig};
use polysync::faults::{inject, plan_for_circuit, sweep, ErrorSource};
use polysync::gates::AbsDiffMode;
use polysync::metrics::synthetic;
use polysync::seeds::SeedTree;
use polysync::sng::{ClockDomain, Lfsr, SngConfig};
use polysync::{Time, Waveform};

fn clock() -> ClockDomain {
    ClockDomain::synchronous(Time::from_ns(2.0), Time::from_ns(2.0) * 1024).unwrap()
}

#[test]
fn measure_shift_grows_with_rate() {
    let c = clock();
    let mut prev = 0.0;
    for rate in [0.05, 0.1, 0.2] {
        let mut shift = 0.0;
        for s in 0..20u32 {
            let w = SngConfig::new(0.3, Lfsr::maximal(10, 1 + s).unwrap(), c)
                .unwrap()
                .generate_covering();
            let src = ErrorSource::new(Lfsr::maximal(10, 500 + s).unwrap(), rate, c).unwrap();
            let d = (inject(&w, &src, |_| true).unwrap().measure() - w.measure()).abs();
            assert!(d <= rate + 0.03, "rate {rate}: shift {d}");
            shift += d;
        }
        let mean = shift / 20.0;
        assert!(mean > prev, "rate {rate}: {mean} <= {prev}");
        prev = mean;
    }
}

#[test]
fn scaled_sources_flip_each_wire_at_the_rate() {
    let c = clock();
    let cell = CellCircuit::robert(AbsDiffMode::Paired { depth: 16 }).unwrap();
    let rate = 0.1;
    let mut total = vec![0.0; cell.netlist().wires().len()];
    for s in 0..20u64 {
        let plan = plan_for_circuit(&cell, rate, s, 10).unwrap();
        for (w, e) in plan.error_waveforms(&c).unwrap().into_iter().enumerate() {
            total[w] += e.map_or(0.0, |e| e.measure());
        }
    }
    for (w, t) in total.iter().enumerate() {
        let m = t / 20.0;
        assert!((m - rate).abs() < 0.02, "wire {w}: flipped fraction {m}");
    }
}

#[test]
fn capped_sources_saturate() {
    let cell = CellCircuit::gamma().unwrap();
    let plan = plan_for_circuit(&cell, 0.2, 1, 10).unwrap();
    assert_eq!(plan.taps().len(), 14);
    assert!(plan.taps().iter().enumerate().all(|(t, _)| plan.tap_probability(t) == 1.0));
}

#[test]
fn rate_zero_sweep_matches_baseline() {
    let img = synthetic::scene(8, 8);
    let inputs = CircuitInputs::Image(img);
    let cfg = RunConfig::default();
    let out = sweep(CircuitKind::Robert, &inputs, &cfg, &[cfg.mode], &[0.0], 1, 11).unwrap();
    let base = run_array(CircuitKind::Robert, &inputs, &cfg, SeedTree::new(11).child(0)).unwrap();
    assert_eq!(out.runs[0].image, base.image);
}

#[test]
fn injection_preserves_horizon_and_checks_it() {
    let c = clock();
    let src = ErrorSource::new(Lfsr::maximal(10, 3).unwrap(), 0.5, c).unwrap();
    let w = Waveform::constant(false, c.horizon());
    assert_eq!(inject(&w, &src, |_| true).unwrap().horizon(), c.horizon());
    let short = Waveform::constant(false, Time::from_ns(10.0));
    assert!(inject(&short, &src, |_| true).is_err());
    let off = ErrorSource::new(Lfsr::maximal(10, 3).unwrap(), 0.0, c).unwrap();
    assert!(inject(&short, &off, |_| true).is_err());
}
