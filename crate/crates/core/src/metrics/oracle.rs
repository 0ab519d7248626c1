//! Software golden references, computed in floating point on `[0, 1]`
//! intensities with replicate padding at the borders.

use crate::circuits::BernsteinCoeffs;
use crate::error::{Error, Result};
use crate::metrics::Image;

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// `0.5 * (|r[i][j] - r[i+1][j+1]| + |r[i][j+1] - r[i+1][j]|)`.
pub fn oracle_robert(img: &Image) -> Image {
    Image::from_fn(img.width(), img.height(), |r, c| {
        let (r, c) = (r as isize, c as isize);
        let v = |dr, dc| img.get_clamped(r + dr, c + dc) as f64 / 255.0;
        to_u8(0.5 * ((v(0, 0) - v(1, 1)).abs() + (v(0, 1) - v(1, 0)).abs()))
    })
}

/// The degree-6 Bernstein polynomial the gamma circuit implements.
pub fn oracle_gamma(img: &Image, coeffs: &BernsteinCoeffs) -> Image {
    Image::from_fn(img.width(), img.height(), |r, c| {
        to_u8(coeffs.evaluate(img.value(r, c)))
    })
}

/// The ideal `x^0.45` curve the polynomial approximates.
pub fn oracle_gamma_ideal(img: &Image) -> Image {
    Image::from_fn(img.width(), img.height(), |r, c| to_u8(img.value(r, c).powf(0.45)))
}

/// Row/column offsets of a `k x k` local window: `-k/2 ..= k/2 - 1` for even
/// `k`, `-(k/2) ..= k/2` for odd `k`.
pub fn window_offsets(k: usize) -> std::ops::RangeInclusive<isize> {
    let h = (k / 2) as isize;
    if k.is_multiple_of(2) {
        -h..=h - 1
    } else {
        -h..=h
    }
}

/// Local mean thresholding: 255 where the pixel is at or above the mean of
/// its `k x k` window, 0 elsewhere.
pub fn oracle_threshold(img: &Image, k: usize) -> Image {
    let offs = window_offsets(k);
    Image::from_fn(img.width(), img.height(), |r, c| {
        let mut sum = 0u64;
        for dr in offs.clone() {
            for dc in offs.clone() {
                sum += img.get_clamped(r as isize + dr, c as isize + dc) as u64;
            }
        }
        let px = img.get(r, c) as u64;
        if px * (k * k) as u64 >= sum {
            255
        } else {
            0
        }
    })
}

/// Kernel density estimate `(1/n) sum exp(-4 |x_t - x_{t-i}|)` per pixel.
pub fn kde_pdf(history: &[Image], current: &Image) -> Result<Vec<f64>> {
    if history.is_empty() {
        return Err(Error::Arity {
            what: "KDE history frames",
            expected: 32,
            got: 0,
        });
    }
    if history.iter().any(|f| !f.same_dims(current)) {
        return Err(Error::DimensionMismatch("KDE frames differ in size".into()));
    }
    let n = history.len() as f64;
    Ok((0..current.height())
        .flat_map(|r| (0..current.width()).map(move |c| (r, c)))
        .map(|(r, c)| {
            let x = current.value(r, c);
            history
                .iter()
                .map(|f| (-4.0 * (x - f.value(r, c)).abs()).exp())
                .sum::<f64>()
                / n
        })
        .collect())
}

/// 0 where the pixel is classified background (`pdf < threshold`), 255 elsewhere.
pub fn oracle_kde(history: &[Image], current: &Image, threshold: f64) -> Result<Image> {
    let pdf = kde_pdf(history, current)?;
    Image::new(
        current.width(),
        current.height(),
        pdf.into_iter().map(|p| if p < threshold { 0 } else { 255 }).collect(),
    )
}
