use proptest::prelude::*;

use polysync::sng::{ClockDomain, Lfsr, SngConfig};
use polysync::{Time, Waveform};

const HORIZON: u64 = 20_000_000;

fn arb_waveform() -> impl Strategy<Value = Waveform> {
    (any::<bool>(), prop::collection::btree_set(1u64..HORIZON, 0..30)).prop_map(|(init, ts)| {
        Waveform::new(init, ts.into_iter().map(Time::from_fs).collect(), Time::from_fs(HORIZON)).unwrap()
    })
}

fn probes() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..HORIZON, 1..20)
}

proptest! {
    #[test]
    fn stored_form_is_canonical(w in arb_waveform()) {
        let ts = w.transitions();
        prop_assert!(ts.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(ts.iter().all(|&t| t > Time::ZERO && t < w.horizon()));
    }

    #[test]
    fn level_follows_toggle_parity(w in arb_waveform(), ps in probes()) {
        for p in ps {
            let t = Time::from_fs(p);
            let toggles = w.transitions().iter().filter(|&&x| x <= t).count();
            prop_assert_eq!(w.level_at(t), w.initial_level() ^ (toggles % 2 == 1));
        }
    }

    #[test]
    fn combine_is_pointwise(a in arb_waveform(), b in arb_waveform(), ps in probes()) {
        let and = a.combine2(&b, |x, y| x && y).unwrap();
        let xor = a.combine2(&b, |x, y| x ^ y).unwrap();
        for p in ps {
            let t = Time::from_fs(p);
            prop_assert_eq!(and.level_at(t), a.level_at(t) && b.level_at(t));
            prop_assert_eq!(xor.level_at(t), a.level_at(t) ^ b.level_at(t));
        }
        prop_assert!(and.transitions().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn algebraic_identities(a in arb_waveform(), b in arb_waveform()) {
        let h = a.horizon();
        prop_assert_eq!(a.combine2(&a, |x, y| x ^ y).unwrap(), Waveform::constant(false, h));
        prop_assert_eq!(a.combine2(&Waveform::constant(true, h), |x, y| x && y).unwrap(), a.clone());
        prop_assert_eq!(a.not().not(), a.clone());
        let m = a.measure() + a.not().measure();
        prop_assert!((m - 1.0).abs() < 1e-12);
        // Inclusion-exclusion on high time.
        let and = a.combine2(&b, |x, y| x && y).unwrap().high_time().fs();
        let or = a.combine2(&b, |x, y| x || y).unwrap().high_time().fs();
        prop_assert_eq!(and + or, a.high_time().fs() + b.high_time().fs());
    }

    #[test]
    fn mux_selects(s in arb_waveform(), a in arb_waveform(), b in arb_waveform(), ps in probes()) {
        let m = Waveform::mux(&s, &a, &b).unwrap();
        for p in ps {
            let t = Time::from_fs(p);
            let expect = if s.level_at(t) { b.level_at(t) } else { a.level_at(t) };
            prop_assert_eq!(m.level_at(t), expect);
        }
    }

    #[test]
    fn filtered_highs_are_wide(w in arb_waveform(), min in 0u64..3_000_000) {
        let min = Time::from_fs(min);
        let f = w.filter_spikes(min);
        let mut edges = vec![Time::ZERO];
        edges.extend_from_slice(f.transitions());
        edges.push(f.horizon());
        for (k, seg) in edges.windows(2).enumerate() {
            let high = f.initial_level() ^ (k % 2 == 1);
            prop_assert!(!high || seg[1] - seg[0] >= min);
        }
        // Filtering only lowers the signal.
        let up = f.combine2(&w, |x, y| x && !y).unwrap();
        prop_assert_eq!(up.high_time(), Time::ZERO);
    }

    #[test]
    fn bytes_round_trip(w in arb_waveform()) {
        prop_assert_eq!(Waveform::from_bytes(&w.to_bytes()).unwrap(), w);
    }

    #[test]
    fn sng_density_tracks_target(q in 0u32..=1024, seed in 1u32..1024) {
        let clk = ClockDomain::synchronous(Time::from_ns(2.0), Time::from_ns(2.0) * 1023).unwrap();
        let sng = SngConfig::new(q as f64 / 1024.0, Lfsr::maximal(10, seed).unwrap(), clk).unwrap();
        let m = sng.generate(1023).unwrap().measure();
        prop_assert!((m - q.saturating_sub(1).min(1023) as f64 / 1023.0).abs() < 1e-9);
    }
}

#[test]
fn mismatched_horizons_are_rejected() {
    let a = Waveform::constant(true, Time::from_ns(10.0));
    let b = Waveform::constant(true, Time::from_ns(11.0));
    assert!(a.combine2(&b, |x, y| x && y).is_err());
    assert!(Waveform::mux(&a, &a, &b).is_err());
}
