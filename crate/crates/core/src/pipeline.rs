//! Dataset-level orchestration shared by the CLI and the Python bindings.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingerprint::{summarize, SetFingerprint};
use crate::ingest::{load_gray, pair_images, DatasetManifest, ManifestEntry, SetLabel};
use crate::metrics::MetricRecord;
use crate::raster::{GrayImage, Plane};
use crate::residual::{residual, DenoiserSpec, Residual};
use crate::spectral::{center_shift, SetAccumulator, SpectralMap};

pub const DEFAULT_CROP: usize = 65;

/// Images decoded and transformed together before folding into the sums.
const LOAD_BATCH: usize = 32;

/// What the spectral stages analyse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Residual,
    Raw,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Residual => "residual",
            Source::Raw => "raw",
        })
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual" => Ok(Source::Residual),
            "raw" => Ok(Source::Raw),
            _ => Err(Error::InvalidValue(format!("unknown source {s:?}"))),
        }
    }
}

/// Analysis settings. Thread count is deliberately absent: it must not
/// influence any output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub analysis_size: usize,
    pub denoiser: DenoiserSpec,
    pub crop: usize,
    pub source: Source,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            analysis_size: crate::ingest::DEFAULT_ANALYSIS_SIZE,
            denoiser: DenoiserSpec::default(),
            crop: DEFAULT_CROP,
            source: Source::Residual,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.analysis_size < 2 {
            return Err(Error::InvalidValue(
                "analysis size must be at least 2".into(),
            ));
        }
        if self.crop.is_multiple_of(2) || self.crop > self.analysis_size {
            return Err(Error::BadSide {
                side: self.crop,
                max: self.analysis_size,
            });
        }
        Ok(())
    }

    /// The field analysed for one standardized image.
    pub fn field(&self, img: &GrayImage) -> Result<Residual> {
        match self.source {
            Source::Residual => residual(img, self.denoiser),
            Source::Raw => Ok(Residual::from_image(img)),
        }
    }
}

/// JSON form of [`AnalysisConfig`] recorded in reports.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigRecord {
    pub analysis_size: usize,
    pub denoiser: String,
    pub crop: usize,
    pub source: Source,
}

impl From<&AnalysisConfig> for ConfigRecord {
    fn from(c: &AnalysisConfig) -> Self {
        Self {
            analysis_size: c.analysis_size,
            denoiser: c.denoiser.to_string(),
            crop: c.crop,
            source: c.source,
        }
    }
}

/// Averaged maps of one set, center-shifted for display and statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SetMaps {
    pub count: usize,
    pub power: SpectralMap,
    pub phase: SpectralMap,
    pub autocorr: SpectralMap,
}

fn load_fields(paths: &[&Path], config: &AnalysisConfig) -> Result<Vec<Residual>> {
    paths
        .par_iter()
        .map(|p| config.field(&load_gray(p, config.analysis_size)?))
        .collect()
}

/// Streams the images at `paths` through the configured field extraction
/// and averages their spectra in path order.
pub fn set_maps(paths: &[&Path], config: &AnalysisConfig) -> Result<SetMaps> {
    if paths.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = config.analysis_size;
    let mut acc = SetAccumulator::new(n, n);
    for batch in paths.chunks(LOAD_BATCH) {
        acc.push_batch(&load_fields(batch, config)?)?;
    }
    centered_maps(acc)
}

/// Averaged, centered maps of fields already in memory.
pub fn field_maps(fields: &[Residual]) -> Result<SetMaps> {
    let first = fields.first().ok_or(Error::EmptyInput)?;
    let mut acc = SetAccumulator::new(first.rows(), first.cols());
    acc.push_batch(fields)?;
    centered_maps(acc)
}

fn centered_maps(acc: SetAccumulator) -> Result<SetMaps> {
    let count = acc.count();
    let spectra = acc.finish()?;
    Ok(SetMaps {
        count,
        power: center_shift(&spectra.power)?,
        phase: center_shift(&spectra.phase)?,
        autocorr: center_shift(&spectra.autocorr)?,
    })
}

pub fn manifest_set_maps(
    manifest: &DatasetManifest,
    set: SetLabel,
    config: &AnalysisConfig,
) -> Result<SetMaps> {
    let paths: Vec<&Path> = manifest.set(set).map(|e| e.path.as_path()).collect();
    set_maps(&paths, config)
}

pub fn fingerprint(maps: &SetMaps, label: &str) -> Result<SetFingerprint> {
    Ok(SetFingerprint {
        summary: summarize(&maps.power, &maps.phase, &maps.autocorr, label)?,
        power: maps.power.clone(),
        phase: maps.phase.clone(),
    })
}

/// Fidelity metrics for every stem-matched pair, on standardized images.
pub fn pair_metrics(manifest: &DatasetManifest, analysis_size: usize) -> Result<Vec<MetricRecord>> {
    let pairing = pair_images(manifest)?;
    pairing
        .pairs
        .par_iter()
        .map(|(real, generated): &(ManifestEntry, ManifestEntry)| {
            let a = load_gray(&real.path, analysis_size)?;
            let b = load_gray(&generated.path, analysis_size)?;
            MetricRecord::compute(real.stem.clone(), &a, &b)
        })
        .collect()
}
