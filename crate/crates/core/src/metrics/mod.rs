//! Images, golden software references and the output-error metric.

mod image;
mod oracle;
pub mod synthetic;

pub use image::Image;
pub use oracle::{
    kde_pdf, oracle_gamma, oracle_gamma_ideal, oracle_kde, oracle_robert, oracle_threshold,
    window_offsets,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum |g - s| / (255 * H * W) * 100`.
pub fn error_rate(g: &Image, s: &Image) -> Result<f64> {
    if !g.same_dims(s) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            g.width(),
            g.height(),
            s.width(),
            s.height()
        )));
    }
    let total: u64 = g
        .pixels()
        .iter()
        .zip(s.pixels())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum();
    Ok(total as f64 / (255.0 * g.pixels().len() as f64) * 100.0)
}

/// Fraction of pixels on which two images agree exactly.
pub fn agreement(a: &Image, b: &Image) -> Result<f64> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch("agreement needs equal sizes".into()));
    }
    let same = a.pixels().iter().zip(b.pixels()).filter(|(x, y)| x == y).count();
    Ok(same as f64 / a.pixels().len() as f64)
}

/// Mean and sample standard deviation of a set of per-trial errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub stddev: f64,
    pub n: usize,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        let n = values.len();
        if n == 0 {
            return Stats {
                mean: f64::NAN,
                stddev: f64::NAN,
                n,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Stats { mean, stddev, n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_rate_examples() {
        let a = Image::filled(3, 2, 200);
        assert_eq!(error_rate(&a, &a).unwrap(), 0.0);
        let hi = Image::filled(4, 4, 255);
        let lo = Image::filled(4, 4, 0);
        assert_eq!(error_rate(&hi, &lo).unwrap(), 100.0);
        let g = Image::new(2, 2, vec![255, 10, 51, 204]).unwrap();
        let s = Image::new(2, 2, vec![0, 10, 0, 0]).unwrap();
        assert!((error_rate(&g, &s).unwrap() - 50.0).abs() < 1e-12);
        assert_eq!(error_rate(&g, &s).unwrap(), error_rate(&s, &g).unwrap());
        assert!(error_rate(&g, &Image::filled(3, 2, 0)).is_err());
    }

    #[test]
    fn stats_of_values() {
        let s = Stats::of(&[1.0, 2.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.stddev - 1.0).abs() < 1e-12);
        assert_eq!(Stats::of(&[4.0]).stddev, 0.0);
    }
}
