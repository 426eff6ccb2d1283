//! Pairwise fidelity metrics between a real image and its generated
//! counterpart, plus dataset aggregation.
//!
//! All metrics assume a dynamic range of `L = 1.0`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::{convolve_separable, gaussian_kernel};
use crate::numfmt::{self, sig6};
use crate::raster::{check_same_shape, GrayImage, Plane};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_C1: f64 = 0.01 * 0.01;
pub const SSIM_C2: f64 = 0.03 * 0.03;
pub const HIST_BINS: usize = 256;

pub const CSV_HEADER: &str = "stem,mse,psnr,ssim,hist_corr";

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_shape(a, b)?;
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.values().len() as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (1.0 / mse).log10()
    }
}

/// Mean structural similarity with an 11×11 Gaussian window (σ = 1.5).
///
/// Local statistics are Gaussian-weighted with mirrored borders, so the
/// SSIM map has the same size as the inputs.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_shape(a, b)?;
    let (rows, cols) = a.shape();
    if rows < SSIM_WINDOW || cols < SSIM_WINDOW {
        return Err(Error::TooSmall {
            rows,
            cols,
            min: SSIM_WINDOW,
        });
    }
    let kernel = gaussian_kernel(SSIM_SIGMA, SSIM_WINDOW / 2);
    let blur = |v: &[f64]| convolve_separable(v, rows, cols, &kernel);
    let product =
        |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| p * q).collect() };

    let (xa, xb) = (a.values(), b.values());
    let mu_a = blur(xa);
    let mu_b = blur(xb);
    let e_aa = blur(&product(xa, xa));
    let e_bb = blur(&product(xb, xb));
    let e_ab = blur(&product(xa, xb));

    let mut total = 0.0;
    for i in 0..rows * cols {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        let num = (2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2);
        let den = (ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2);
        total += num / den;
    }
    Ok(total / (rows * cols) as f64)
}

fn normalized_histogram(img: &GrayImage) -> [f64; HIST_BINS] {
    let mut hist = [0.0; HIST_BINS];
    for &v in img.values() {
        let bin = ((v * HIST_BINS as f64).floor() as usize).min(HIST_BINS - 1);
        hist[bin] += 1.0;
    }
    let n = img.values().len() as f64;
    hist.map(|c| c / n)
}

/// Pearson correlation of the two normalized 256-bin luminance histograms.
///
/// A histogram with zero variance across bins yields 1 if both histograms
/// are identical and 0 otherwise.
pub fn hist_correlation(a: &GrayImage, b: &GrayImage) -> f64 {
    let ha = normalized_histogram(a);
    let hb = normalized_histogram(b);
    let mean = 1.0 / HIST_BINS as f64;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (x, y) in ha.iter().zip(&hb) {
        let (dx, dy) = (x - mean, y - mean);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return if ha == hb { 1.0 } else { 0.0 };
    }
    (cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRecord {
    pub stem: String,
    #[serde(serialize_with = "numfmt::serialize")]
    pub mse: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub psnr: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub ssim: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub hist_corr: f64,
}

impl MetricRecord {
    pub fn compute(
        stem: impl Into<String>,
        real: &GrayImage,
        generated: &GrayImage,
    ) -> Result<Self> {
        let mse = mse(real, generated)?;
        Ok(Self {
            stem: stem.into(),
            mse,
            psnr: psnr_from_mse(mse),
            ssim: ssim(real, generated)?,
            hist_corr: hist_correlation(real, generated),
        })
    }

    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Mse => self.mse,
            Metric::Psnr => self.psnr,
            Metric::Ssim => self.ssim,
            Metric::HistCorr => self.hist_corr,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.stem,
            sig6(self.mse),
            sig6(self.psnr),
            sig6(self.ssim),
            sig6(self.hist_corr)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Mse,
    Psnr,
    Ssim,
    HistCorr,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Mse, Metric::Psnr, Metric::Ssim, Metric::HistCorr];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Mse => "mse",
            Metric::Psnr => "psnr",
            Metric::Ssim => "ssim",
            Metric::HistCorr => "hist_corr",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidValue(format!("unknown metric {s:?}")))
    }
}

/// Mean and population standard deviation of one metric.
///
/// Infinite values (PSNR of identical pairs) are left out of the moments
/// and counted in `infinite`. When every value is infinite the mean is
/// reported as infinite with `count = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    pub metric: Metric,
    #[serde(serialize_with = "numfmt::serialize")]
    pub mean: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub std: f64,
    pub count: usize,
    pub infinite: usize,
}

pub fn aggregate(records: &[MetricRecord], metric: Metric) -> Result<AggregateStats> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let values: Vec<f64> = records.iter().map(|r| r.get(metric)).collect();
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let infinite = values.len() - finite.len();
    if finite.is_empty() {
        let mean = values
            .iter()
            .copied()
            .find(|v| v.is_infinite())
            .unwrap_or(f64::NAN);
        return Ok(AggregateStats {
            metric,
            mean,
            std: 0.0,
            count: 0,
            infinite,
        });
    }
    let n = finite.len() as f64;
    let mean = finite.iter().sum::<f64>() / n;
    let var = finite.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(AggregateStats {
        metric,
        mean,
        std: var.sqrt(),
        count: finite.len(),
        infinite,
    })
}

pub fn aggregate_all(records: &[MetricRecord]) -> Result<Vec<AggregateStats>> {
    Metric::ALL.iter().map(|&m| aggregate(records, m)).collect()
}

pub fn write_csv(records: &[MetricRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
