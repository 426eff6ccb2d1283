//! In-memory image containers.

use crate::error::{Error, Result};

/// A row-major 2-D field of `f64` samples.
///
/// Implemented by everything the spectral routines can transform:
/// grayscale images, noise residuals and spectral maps.
pub trait Plane {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn values(&self) -> &[f64];

    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn at(&self, row: usize, col: usize) -> f64 {
        self.values()[row * self.cols() + col]
    }
}

pub(crate) fn check_same_shape(a: &impl Plane, b: &impl Plane) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    Ok(())
}

/// Decoded 8-bit sRGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidValue(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidValue(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }
}

/// Single-channel luminance image with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidValue(format!(
                "image dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidValue(format!(
                "{} values for a {rows}x{cols} image",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidValue(format!("luminance {v} outside [0, 1]")));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    /// Builds an image from a function of `(row, col)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let values = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Self::new(rows, cols, values)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Constructor for values already known to be in range.
    pub(crate) fn from_clamped(rows: usize, cols: usize, mut values: Vec<f64>) -> Self {
        for v in &mut values {
            *v = v.clamp(0.0, 1.0);
        }
        Self { rows, cols, values }
    }
}

impl Plane for GrayImage {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn values(&self) -> &[f64] {
        &self.values
    }
}
