//! Noise residuals `r = x − D(x)` with a configurable classical denoiser.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filter::{convolve_separable, gaussian_kernel, median};
use crate::raster::{GrayImage, Plane};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DenoiserSpec {
    Identity,
    Gaussian { sigma: f64 },
    Median { radius: usize },
}

impl Default for DenoiserSpec {
    fn default() -> Self {
        DenoiserSpec::Gaussian { sigma: 1.0 }
    }
}

impl DenoiserSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidValue(format!(
                "gaussian sigma must be > 0, got {sigma}"
            )));
        }
        Ok(DenoiserSpec::Gaussian { sigma })
    }

    pub fn median(radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidValue("median radius must be >= 1".into()));
        }
        Ok(DenoiserSpec::Median { radius })
    }

    fn validate(self) -> Result<Self> {
        match self {
            DenoiserSpec::Identity => Ok(self),
            DenoiserSpec::Gaussian { sigma } => Self::gaussian(sigma),
            DenoiserSpec::Median { radius } => Self::median(radius),
        }
    }
}

impl fmt::Display for DenoiserSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenoiserSpec::Identity => f.write_str("identity"),
            DenoiserSpec::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            DenoiserSpec::Median { radius } => write!(f, "median:{radius}"),
        }
    }
}

/// Parses `identity`, `gaussian:<sigma>` or `median:<radius>`. A bare
/// `gaussian` or `median` takes the default parameter.
impl FromStr for DenoiserSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let bad = || Error::InvalidValue(format!("bad denoiser {s:?}"));
        match (kind, arg) {
            ("identity", None) => Ok(DenoiserSpec::Identity),
            ("gaussian", None) => Ok(DenoiserSpec::default()),
            ("gaussian", Some(a)) => Self::gaussian(a.parse().map_err(|_| bad())?),
            ("median", None) => Ok(DenoiserSpec::Median { radius: 1 }),
            ("median", Some(a)) => Self::median(a.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

/// Signed residual field, same shape as its source image.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl Residual {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::InvalidValue(format!(
                "{} values for a {rows}x{cols} residual",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidValue("residual values must be finite".into()));
        }
        Ok(Self { rows, cols, values })
    }

    /// Wraps an image unchanged, for analysing raw images instead of
    /// residuals.
    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            rows: img.rows(),
            cols: img.cols(),
            values: img.values().to_vec(),
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl Plane for Residual {
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

fn denoise_unclamped(img: &GrayImage, sigma: f64) -> Vec<f64> {
    let kernel = gaussian_kernel(sigma, (4.0 * sigma).ceil() as usize);
    convolve_separable(img.values(), img.rows(), img.cols(), &kernel)
}

/// Applies the denoiser; output clamped to `[0, 1]`.
///
/// Gaussian uses a normalized kernel of half-width `ceil(4σ)`, median a
/// `(2r+1)²` window; both mirror at the borders.
pub fn denoise(img: &GrayImage, spec: DenoiserSpec) -> Result<GrayImage> {
    let (rows, cols) = img.shape();
    let out = match spec.validate()? {
        DenoiserSpec::Identity => return Ok(img.clone()),
        DenoiserSpec::Gaussian { sigma } => denoise_unclamped(img, sigma),
        DenoiserSpec::Median { radius } => median(img.values(), rows, cols, radius),
    };
    Ok(GrayImage::from_clamped(rows, cols, out))
}

/// `img − denoise(img)`, shifted to zero mean.
pub fn residual(img: &GrayImage, spec: DenoiserSpec) -> Result<Residual> {
    let smooth = denoise(img, spec)?;
    let mut values: Vec<f64> = img
        .values()
        .iter()
        .zip(smooth.values())
        .map(|(x, d)| x - d)
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in &mut values {
        *v -= mean;
    }
    Ok(Residual {
        rows: img.rows(),
        cols: img.cols(),
        values,
    })
}
