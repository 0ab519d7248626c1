//! Independent discrete-time reference for synchronous runs: plain bit
//! vectors, no waveforms, no clocks.

#![allow(dead_code)]

/// Fibonacci LFSR: feedback is the parity of the 1-based tap positions, the
/// register shifts left and the new state is the output.
pub struct RefLfsr {
    state: u32,
    width: u32,
    taps: Vec<u32>,
}

impl RefLfsr {
    pub fn new(width: u32, taps: &[u32], seed: u32) -> Self {
        RefLfsr {
            state: seed,
            width,
            taps: taps.to_vec(),
        }
    }

    pub fn next(&mut self) -> u32 {
        let fb = self.taps.iter().fold(0, |acc, &t| acc ^ ((self.state >> (t - 1)) & 1));
        self.state = ((self.state << 1) | fb) & ((1 << self.width) - 1);
        self.state
    }
}

/// `n` bits of `r < round(p * 2^width)` from a 10-bit register.
pub fn ref_stream(p: f64, seed: u32, n: usize) -> Vec<bool> {
    let q = (p * 1024.0).round() as u32;
    let mut l = RefLfsr::new(10, &[10, 7], seed);
    (0..n).map(|_| l.next() < q).collect()
}

/// Pairs unmatched ones of two streams, holding at most `depth` of either.
pub fn ref_paired_xor(a: &[bool], b: &[bool], depth: i32) -> Vec<bool> {
    let mut held = 0i32;
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let (x, y) = match (x, y) {
                (true, false) if held < 0 => {
                    held += 1;
                    (true, true)
                }
                (true, false) if held < depth => {
                    held += 1;
                    (false, false)
                }
                (false, true) if held > 0 => {
                    held -= 1;
                    (true, true)
                }
                (false, true) if held > -depth => {
                    held -= 1;
                    (false, false)
                }
                other => other,
            };
            x ^ y
        })
        .collect()
}

pub fn ref_mux(a: &[bool], b: &[bool], sel: &[bool]) -> Vec<bool> {
    a.iter()
        .zip(b)
        .zip(sel)
        .map(|((&x, &y), &s)| if s { y } else { x })
        .collect()
}
