//! Cell-level behaviour against analytic references.

use polysync::circuits::{
    gamma_cell, kde_cell, robert_cell, threshold_cell, BernsteinCoeffs, CellCircuit, CircuitKind,
};
use polysync::gates::{AbsDiffMode, ExpFsmParams};
use polysync::seeds::SeedTree;
use polysync::sng::{random_clock, ClockDomain, Lfsr, SngConfig};
use polysync::time::TimeGrid;
use polysync::{Time, Waveform};

fn horizon() -> Time {
    Time::from_ns(4.0) * 1024
}

fn local_clock(seed: u64) -> ClockDomain {
    random_clock(seed, 2.0, 4.0, horizon(), TimeGrid::default()).unwrap()
}

fn stream(p: f64, seed: u64, clk: &ClockDomain) -> Waveform {
    let l = Lfsr::maximal(10, SeedTree::new(seed).lfsr_seed(10)).unwrap();
    SngConfig::new(p, l, *clk).unwrap().generate_covering()
}

fn foreign(p: f64, seed: u64) -> Waveform {
    stream(p, seed, &local_clock(seed ^ 0xabcd)).filter_spikes(Time::from_ns(0.2))
}

/// Reference Bernstein value, computed directly from the binomial expansion.
fn bernstein(b: &[f64; 7], x: f64) -> f64 {
    let binom = |n: u64, k: u64| (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64);
    (0..=6u64)
        .map(|i| b[i as usize] * binom(6, i) * x.powi(i as i32) * (1.0 - x).powi(6 - i as i32))
        .sum()
}

#[test]
fn gamma_matches_bernstein_sum() {
    let b = BernsteinCoeffs::default();
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let mut total = 0.0;
        for s in 0..20u64 {
            let clk = local_clock(900 + s);
            let xs: Vec<Waveform> = (0..6).map(|k| foreign(x, 100 * s + k)).collect();
            let cs: Vec<Waveform> = (0..7).map(|k| foreign(b.0[k as usize], 100 * s + 50 + k)).collect();
            let xr: Vec<&Waveform> = xs.iter().collect();
            let cr: Vec<&Waveform> = cs.iter().collect();
            total += gamma_cell(&xr, &cr, &clk).unwrap().measure();
        }
        let m = total / 20.0;
        let expect = bernstein(&b.0, x);
        assert!((m - expect).abs() < 0.02, "x={x}: {m} vs {expect}");
        assert!((b.evaluate(x) - expect).abs() < 1e-12);
    }
}

#[test]
fn robert_correlated_pairs() {
    // One shared source and one clock: XOR gives exact differences.
    let clk = local_clock(3);
    let src = |p: f64| stream(p, 42, &clk);
    let sel = stream(0.5, 7, &clk);
    let y = robert_cell(&src(0.9), &src(0.1), &src(0.5), &src(0.5), &sel, AbsDiffMode::Correlated, &clk).unwrap();
    assert!((y.measure() - 0.4).abs() < 0.03, "{}", y.measure());
}

#[test]
fn robert_unsynchronized_neighbours() {
    let mut total = 0.0;
    for s in 0..20u64 {
        let clk = local_clock(500 + s);
        let y = robert_cell(
            &foreign(0.9, 10 * s),
            &foreign(0.1, 10 * s + 1),
            &foreign(0.5, 10 * s + 2),
            &foreign(0.5, 10 * s + 3),
            &stream(0.5, 10 * s + 4, &clk),
            AbsDiffMode::Paired { depth: 16 },
            &clk,
        )
        .unwrap();
        total += y.measure();
    }
    let m = total / 20.0;
    assert!((m - 0.4).abs() < 0.03, "{m}");
}

#[test]
fn threshold_stationary_decision() {
    let mut total = 0.0;
    for s in 0..10u64 {
        let clk = local_clock(70 + s);
        let window: Vec<Waveform> = (0..64).map(|k| foreign(0.5, 1000 * s + k)).collect();
        let sels: Vec<Waveform> = (0..6).map(|k| stream(0.5, 1000 * s + 500 + k, &clk)).collect();
        let wr: Vec<&Waveform> = window.iter().collect();
        let sr: Vec<&Waveform> = sels.iter().collect();
        total += threshold_cell(&wr, &foreign(0.7, 1000 * s + 900), &sr, &clk, 32).unwrap().measure();
    }
    assert!(total / 10.0 >= 0.9, "{}", total / 10.0);
}

#[test]
fn threshold_netlist_equals_direct_composition() {
    let clk = local_clock(1);
    let window: Vec<Waveform> = (0..64).map(|k| foreign((k % 7) as f64 / 7.0, k)).collect();
    let sels: Vec<Waveform> = (0..6).map(|k| stream(0.5, 300 + k, &clk)).collect();
    let wr: Vec<&Waveform> = window.iter().collect();
    let sr: Vec<&Waveform> = sels.iter().collect();
    let direct = threshold_cell(&wr, wr[36], &sr, &clk, 32).unwrap();
    let cell = CellCircuit::threshold(8, 32).unwrap();
    assert_eq!(cell.kind(), CircuitKind::Threshold);
    let all: Vec<&Waveform> = wr.iter().chain(sr.iter()).copied().collect();
    assert_eq!(cell.evaluate(&all, &clk, None).unwrap(), direct);
}

#[test]
fn kde_half_matching_history() {
    let params = ExpFsmParams::default();
    let expect = (1.0 + (-4.0f64).exp()) / 2.0;
    let mut total = 0.0;
    for s in 0..10u64 {
        let clk = local_clock(40 + s);
        let h = clk.horizon();
        let x = Waveform::constant(true, h);
        let hist: Vec<Waveform> = (0..32)
            .map(|i| Waveform::constant(i % 2 == 0, h))
            .collect();
        let hr: Vec<&Waveform> = hist.iter().collect();
        let sels: Vec<Waveform> = (0..5).map(|k| stream(0.5, 60 * s + k, &clk)).collect();
        let sr: Vec<&Waveform> = sels.iter().collect();
        let gate = stream(params.gate_probability, 60 * s + 9, &clk);
        let d = kde_cell(&x, &hr, &sr, &gate, &clk, AbsDiffMode::Paired { depth: 16 }, &params, 0.5).unwrap();
        total += d.estimate;
    }
    let m = total / 10.0;
    assert!((m - expect).abs() <= 0.06, "{m} vs {expect}");
}

#[test]
fn wrong_stream_counts_are_rejected() {
    let clk = local_clock(1);
    let w = Waveform::constant(false, clk.horizon());
    let five = vec![&w; 5];
    let seven = vec![&w; 7];
    assert!(gamma_cell(&five, &seven, &clk).is_err());
    let params = ExpFsmParams::default();
    let thirty = vec![&w; 30];
    assert!(kde_cell(&w, &thirty, &five, &w, &clk, AbsDiffMode::Independent, &params, 0.5).is_err());
}
