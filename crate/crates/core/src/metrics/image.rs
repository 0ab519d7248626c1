use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};

/// 8-bit grayscale image, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch("image dimensions must be > 0".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Image::new(width, height, vec![value; width * height]).expect("nonzero dimensions")
    }

    pub fn from_fn<F>(width: usize, height: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> u8,
    {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Image::new(width, height, pixels).expect("nonzero dimensions")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Pixel with replicate padding outside the image.
    pub fn get_clamped(&self, row: isize, col: isize) -> u8 {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.get(r, c)
    }

    /// Intensity normalized to `[0, 1]`.
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.get(row, col) as f64 / 255.0
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
            .map_err(|e| Error::Image(e.to_string()))?
            .to_luma8();
        let (w, h) = img.dimensions();
        Image::new(w as usize, h as usize, img.into_raw())
    }

    /// Binary (P5) 8-bit PGM.
    pub fn to_pgm_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Cursor::new(Vec::new());
        PnmEncoder::new(&mut buf)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(
                &self.pixels,
                self.width as u32,
                self.height as u32,
                ExtendedColorType::L8,
            )
            .map_err(|e| Error::Image(e.to_string()))?;
        Ok(buf.into_inner())
    }

    pub fn load_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Image::from_pgm_bytes(&bytes)
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_pgm_bytes()?)?;
        Ok(())
    }
}
