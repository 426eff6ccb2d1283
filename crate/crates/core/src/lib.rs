//! Forensic statistics over image noise residuals.
//!
//! The pipeline runs `ingest` (decode, grayscale, standardize, manifest),
//! `residual` (denoiser high-pass), `spectral` (DFT, power/phase spectra,
//! circular autocorrelation and their dataset means), `fingerprint`
//! (scalar statistics and set comparison) and `render` (MAT1 matrices,
//! grayscale heatmaps, CSV/JSON reports). `metrics` holds the pairwise
//! fidelity metrics. The `cli` module wires everything behind the
//! `specprint` binary.

pub mod cli;
pub mod error;
mod filter;
pub mod fingerprint;
pub mod ingest;
pub mod metrics;
pub mod numfmt;
pub mod pipeline;
pub mod raster;
pub mod render;
pub mod residual;
pub mod spectral;

pub use crate::error::{Error, Result};
pub use crate::raster::{GrayImage, Plane, RgbImage};
pub use crate::residual::{DenoiserSpec, Residual};
pub use crate::spectral::{ComplexSpectrum, MapKind, SpectralMap};
