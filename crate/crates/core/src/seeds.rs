//! Counter-based seed derivation.
//!
//! Every random source in a run is addressed by a path of integer labels
//! below one master seed: `master / trial / domain / cell / slot`. Each step
//! is a SplitMix64 finalization of the parent value mixed with the label, so
//! any single stream can be re-derived in isolation and the result does not
//! depend on evaluation order or thread count.

/// Path labels for the top-level seed domains of a trial.
pub mod domain {
    /// SNG seeds: pixel streams, frame streams and cell-local constants.
    /// Shared by the synchronous and polysynchronous arms.
    pub const STREAMS: u64 = 1;
    /// Local clock draws (polysynchronous arm only).
    pub const CLOCKS: u64 = 2;
    /// Soft-error source seeds.
    pub const FAULTS: u64 = 3;

    pub const PIXEL: u64 = 10;
    pub const FRAME: u64 = 11;
    pub const LOCAL: u64 = 12;
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeedTree(u64);

impl SeedTree {
    pub fn new(master: u64) -> Self {
        SeedTree(splitmix64(master))
    }

    pub fn child(self, label: u64) -> SeedTree {
        SeedTree(splitmix64(self.0 ^ splitmix64(label.wrapping_mul(GOLDEN))))
    }

    pub fn path(self, labels: &[u64]) -> SeedTree {
        labels.iter().fold(self, |t, &l| t.child(l))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// A nonzero register state for a `width`-bit LFSR.
    pub fn lfsr_seed(self, width: u32) -> u32 {
        let modulus = (1u64 << width) - 1;
        (self.0 % modulus + 1) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_are_stable_and_distinct() {
        let t = SeedTree::new(42);
        assert_eq!(t.path(&[1, 2, 3]), t.child(1).child(2).child(3));
        assert_ne!(t.path(&[1, 2]), t.path(&[2, 1]));
        assert_ne!(t.child(0), t);
    }

    #[test]
    fn lfsr_seeds_are_nonzero_and_in_range() {
        let t = SeedTree::new(7);
        for i in 0..1000 {
            let s = t.child(i).lfsr_seed(10);
            assert!((1..1024).contains(&s));
        }
    }
}
