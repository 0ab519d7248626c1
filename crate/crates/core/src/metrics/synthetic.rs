//! Deterministic test inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metrics::Image;

/// Horizontal gray ramp from 0 at the left edge to 255 at the right.
pub fn ramp(width: usize, height: usize) -> Image {
    let span = (width.max(2) - 1) as f64;
    Image::from_fn(width, height, |_, c| (255.0 * c as f64 / span).round() as u8)
}

/// Square checkerboard with `cell`-pixel squares.
pub fn checkerboard(width: usize, height: usize, cell: usize, lo: u8, hi: u8) -> Image {
    let cell = cell.max(1);
    Image::from_fn(width, height, |r, c| if (r / cell + c / cell).is_multiple_of(2) { hi } else { lo })
}

/// Uniform random intensities.
pub fn noise(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image::from_fn(width, height, |_, _| rng.random())
}

/// A smooth natural-looking scene: shaded background, a bright disc and a
/// dark bar, with soft edges.
pub fn scene(width: usize, height: usize) -> Image {
    let (w, h) = (width as f64, height as f64);
    Image::from_fn(width, height, |r, c| {
        let (y, x) = (r as f64 / h, c as f64 / w);
        let mut v = 60.0 + 90.0 * x + 40.0 * y;
        let d = ((x - 0.35).powi(2) + (y - 0.4).powi(2)).sqrt();
        v += 100.0 * (1.0 - smooth(d, 0.18, 0.24));
        if (0.6..0.8).contains(&x) {
            v -= 110.0 * (1.0 - smooth((y - 0.6).abs(), 0.2, 0.26));
        }
        v.clamp(0.0, 255.0).round() as u8
    })
}

fn smooth(v: f64, lo: f64, hi: f64) -> f64 {
    let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// A halftoned page: 2x2 dots alternating between ink and paper levels under
/// slowly varying illumination. Every 8x8 window holds equal ink and paper
/// area, so each pixel sits well clear of its local mean.
pub fn halftone(width: usize, height: usize) -> Image {
    let span = width.max(2) as f64;
    Image::from_fn(width, height, |r, c| {
        let light = 20.0 * (c as f64 / span) + 10.0 * ((r % 16) as f64 / 16.0);
        if (r / 2 + c / 2) % 2 == 0 {
            (205.0 + light) as u8
        } else {
            (25.0 + light) as u8
        }
    })
}

/// History frames and a current frame for background subtraction.
#[derive(Clone, Debug, PartialEq)]
pub struct Video {
    pub history: Vec<Image>,
    pub current: Image,
}

/// A static textured background with a bright square drifting along the top
/// band of the history frames; in the current frame the square appears in
/// the bottom band, which it never visited. Each frame carries a few levels
/// of sensor noise.
pub fn video(width: usize, height: usize, frames: usize, seed: u64) -> Video {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let background = Image::from_fn(width, height, |r, c| {
        (70 + (r * 5 + c * 3) % 60) as u8
    });
    let side = (width.min(height) / 6).max(2);
    let band = (height / 2).saturating_sub(side).max(1);
    let travel = width.saturating_sub(side).max(1);
    let frame = |top: usize, left: usize, rng: &mut ChaCha8Rng| {
        Image::from_fn(width, height, |r, c| {
            let inside = (top..top + side).contains(&r) && (left..left + side).contains(&c);
            let base = if inside { 230i32 } else { background.get(r, c) as i32 };
            (base + rng.random_range(-3..=3)).clamp(0, 255) as u8
        })
    };
    let history = (0..frames)
        .map(|f| {
            let left = (f * 2) % travel;
            let top = (f / (travel / 2).max(1)) % band;
            frame(top, left, &mut rng)
        })
        .collect();
    let current = frame(height - side - 1, width / 3, &mut rng);
    Video { history, current }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{kde_pdf, oracle_threshold};

    #[test]
    fn ramp_spans_full_range() {
        let r = ramp(256, 2);
        assert_eq!(r.get(0, 0), 0);
        assert_eq!(r.get(1, 255), 255);
        assert_eq!(r.get(0, 128), 128);
    }

    #[test]
    fn halftone_has_margin_from_local_mean() {
        let img = halftone(32, 32);
        let th = oracle_threshold(&img, 8);
        let offs = crate::metrics::window_offsets(8);
        for r in 0..32 {
            for c in 0..32 {
                let mut sum = 0.0;
                for dr in offs.clone() {
                    for dc in offs.clone() {
                        sum += img.get_clamped(r as isize + dr, c as isize + dc) as f64;
                    }
                }
                let margin = (img.get(r, c) as f64 - sum / 64.0).abs();
                assert!(margin > 35.0, "({r},{c}) margin {margin}");
            }
        }
        assert!(th.pixels().contains(&0) && th.pixels().contains(&255));
    }

    #[test]
    fn video_has_both_classes_with_margin() {
        let v = video(32, 32, 32, 5);
        let pdf = kde_pdf(&v.history, &v.current).unwrap();
        assert!(pdf.iter().any(|&p| p < 0.3));
        assert!(pdf.iter().any(|&p| p > 0.7));
        let near = pdf.iter().filter(|&&p| (p - 0.5).abs() < 0.1).count();
        assert_eq!(near, 0);
    }
}
