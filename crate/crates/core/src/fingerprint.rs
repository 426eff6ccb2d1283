//! Scalar statistics over averaged spectra and autocorrelations, and
//! set-to-set comparison.
//!
//! Power statistics expect centered power maps. Fractions are in
//! `[0, 1]`, similarities in percent.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt;
use crate::raster::{check_same_shape, Plane};
use crate::spectral::{log_normalize, MapKind, SpectralMap};

pub const PHASE_BINS: usize = 64;
const EPS: f64 = 1e-12;

fn wrap(d: f64) -> f64 {
    let w = d.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

fn require_centered(map: &SpectralMap) -> Result<()> {
    if map.centered {
        Ok(())
    } else {
        Err(Error::NotCentered)
    }
}

/// Non-DC energy on the central row and column, and in total.
fn axis_energies(s: &SpectralMap) -> (f64, f64, f64) {
    let (cr, cc) = s.origin();
    let (mut row, mut col, mut total) = (0.0, 0.0, 0.0);
    for r in 0..s.rows() {
        for c in 0..s.cols() {
            if (r, c) == (cr, cc) {
                continue;
            }
            let v = s.at(r, c);
            total += v;
            if r == cr {
                row += v;
            } else if c == cc {
                col += v;
            }
        }
    }
    (row, col, total)
}

/// Share of non-DC power lying on the central row and column.
pub fn cross_pattern_strength(s: &SpectralMap) -> Result<f64> {
    require_centered(s)?;
    let (row, col, total) = axis_energies(s);
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok(((row + col) / total).clamp(0.0, 1.0))
}

/// Mean log-normalized power over the annulus `0.25·r_max ≤ r ≤ 0.5·r_max`
/// around DC, with `r_max = min(M, N)/2`.
pub fn mid_freq_intensity(s: &SpectralMap) -> Result<f64> {
    require_centered(s)?;
    let normalized = log_normalize(s);
    let (cr, cc) = s.origin();
    let r_max = s.rows().min(s.cols()) as f64 / 2.0;
    let (inner, outer) = (0.25 * r_max, 0.5 * r_max);
    let (mut sum, mut count) = (0.0, 0usize);
    for r in 0..s.rows() {
        for c in 0..s.cols() {
            let dr = r as f64 - cr as f64;
            let dc = c as f64 - cc as f64;
            let dist = (dr * dr + dc * dc).sqrt();
            if dist >= inner && dist <= outer {
                sum += normalized.at(r, c);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Ok(0.0);
    }
    Ok((sum / count as f64).clamp(0.0, 1.0))
}

/// `|E_h − E_v| / (E_h + E_v)` over the non-DC central row and column.
pub fn axis_asymmetry(s: &SpectralMap) -> Result<f64> {
    require_centered(s)?;
    let (row, col, _) = axis_energies(s);
    if row + col <= 0.0 {
        return Ok(0.0);
    }
    Ok(((row - col).abs() / (row + col)).clamp(0.0, 1.0))
}

/// Mean resultant length of unit phasors over each interior 3×3
/// neighbourhood.
pub fn phase_coherence(p: &SpectralMap) -> Result<f64> {
    let (rows, cols) = p.shape();
    if rows < 3 || cols < 3 {
        return Err(Error::TooSmall { rows, cols, min: 3 });
    }
    let mut total = 0.0;
    for r in 1..rows - 1 {
        for c in 1..cols - 1 {
            let mut acc = Complex64::new(0.0, 0.0);
            for rr in r - 1..=r + 1 {
                for cc in c - 1..=c + 1 {
                    acc += Complex64::from_polar(1.0, p.at(rr, cc));
                }
            }
            total += acc.norm() / 9.0;
        }
    }
    Ok((total / ((rows - 2) * (cols - 2)) as f64).clamp(0.0, 1.0))
}

/// Mean wrapped phase jump `|wrap(φ₂ − φ₁)|/π` over all horizontally and
/// vertically adjacent pairs.
pub fn phase_transition_rate(p: &SpectralMap) -> f64 {
    let (rows, cols) = p.shape();
    let (mut sum, mut count) = (0.0, 0usize);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                sum += wrap(p.at(r, c + 1) - p.at(r, c)).abs();
                count += 1;
            }
            if r + 1 < rows {
                sum += wrap(p.at(r + 1, c) - p.at(r, c)).abs();
                count += 1;
            }
        }
    }
    if count == 0 {
        return 0.0;
    }
    (sum / (count as f64 * PI)).clamp(0.0, 1.0)
}

fn phase_bin(phi: f64) -> usize {
    let width = 2.0 * PI / PHASE_BINS as f64;
    let idx = ((phi + PI) / width).ceil() as isize - 1;
    idx.clamp(0, PHASE_BINS as isize - 1) as usize
}

/// Shannon entropy of the 64-bin phase histogram over `(−π, π]`, divided
/// by `ln 64`.
pub fn phase_entropy(p: &SpectralMap) -> f64 {
    let mut hist = [0usize; PHASE_BINS];
    for &v in p.values() {
        hist[phase_bin(v)] += 1;
    }
    let n = p.values().len() as f64;
    let h: f64 = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let q = c as f64 / n;
            -q * q.ln()
        })
        .sum();
    (h / (PHASE_BINS as f64).ln()).clamp(0.0, 1.0)
}

/// `100·(1 + mean cos(wrap(A − B)))/2`.
pub fn phase_structural_similarity(a: &SpectralMap, b: &SpectralMap) -> Result<f64> {
    check_same_shape(a, b)?;
    let mean = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| wrap(x - y).cos())
        .sum::<f64>()
        / a.values().len() as f64;
    Ok((100.0 * (1.0 + mean) / 2.0).clamp(0.0, 100.0))
}

/// `100·(1 − MSE)` between the log-normalized power maps.
pub fn spectrum_similarity(a: &SpectralMap, b: &SpectralMap) -> Result<f64> {
    check_same_shape(a, b)?;
    Ok(normalized_similarity(&log_normalize(a), &log_normalize(b)))
}

fn normalized_similarity(a: &SpectralMap, b: &SpectralMap) -> f64 {
    let mse = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.values().len() as f64;
    (100.0 * (1.0 - mse)).clamp(0.0, 100.0)
}

/// Mean of the four diagonal lag-1 neighbours minus mean of the four axial
/// ones, around the zero-lag cell of a centered normalized
/// autocorrelation. Ranges over `[−2, 2]`; positive values indicate
/// checkerboard periodicity.
pub fn zero_lag_checkerboard(r: &SpectralMap) -> Result<f64> {
    require_centered(r)?;
    let (rows, cols) = r.shape();
    if rows < 5 || cols < 5 {
        return Err(Error::TooSmall { rows, cols, min: 5 });
    }
    if r.kind != MapKind::Autocorr || !r.normalized {
        return Err(Error::DegenerateAutocorr(
            "expected a normalized autocorrelation".into(),
        ));
    }
    let (cr, cc) = r.origin();
    if (r.at(cr, cc) - 1.0).abs() > 1e-9 {
        return Err(Error::DegenerateAutocorr(format!(
            "zero-lag value {} is not 1",
            r.at(cr, cc)
        )));
    }
    let diagonal =
        (r.at(cr - 1, cc - 1) + r.at(cr - 1, cc + 1) + r.at(cr + 1, cc - 1) + r.at(cr + 1, cc + 1))
            / 4.0;
    let axial = (r.at(cr - 1, cc) + r.at(cr + 1, cc) + r.at(cr, cc - 1) + r.at(cr, cc + 1)) / 4.0;
    Ok((diagonal - axial).clamp(-2.0, 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FingerprintSummary {
    pub label: String,
    #[serde(serialize_with = "numfmt::serialize")]
    pub cross_pattern_strength: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub mid_freq_intensity: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub axis_asymmetry: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_coherence: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_transition_rate: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_entropy: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub zero_lag_checkerboard: f64,
}

impl FingerprintSummary {
    /// Scalar fields by name, in declaration order.
    pub fn scalars(&self) -> [(&'static str, f64); 7] {
        [
            ("cross_pattern_strength", self.cross_pattern_strength),
            ("mid_freq_intensity", self.mid_freq_intensity),
            ("axis_asymmetry", self.axis_asymmetry),
            ("phase_coherence", self.phase_coherence),
            ("phase_transition_rate", self.phase_transition_rate),
            ("phase_entropy", self.phase_entropy),
            ("zero_lag_checkerboard", self.zero_lag_checkerboard),
        ]
    }
}

/// A set's summary together with the maps it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFingerprint {
    pub summary: FingerprintSummary,
    /// Centered averaged power spectrum.
    pub power: SpectralMap,
    /// Centered averaged phase spectrum.
    pub phase: SpectralMap,
}

pub fn summarize(
    power: &SpectralMap,
    phase: &SpectralMap,
    autocorr: &SpectralMap,
    label: &str,
) -> Result<FingerprintSummary> {
    check_same_shape(power, phase)?;
    Ok(FingerprintSummary {
        label: label.to_string(),
        cross_pattern_strength: cross_pattern_strength(power)?,
        mid_freq_intensity: mid_freq_intensity(power)?,
        axis_asymmetry: axis_asymmetry(power)?,
        phase_coherence: phase_coherence(phase)?,
        phase_transition_rate: phase_transition_rate(phase),
        phase_entropy: phase_entropy(phase),
        zero_lag_checkerboard: zero_lag_checkerboard(autocorr)?,
    })
}

/// Per-statistic similarities of a candidate set to a reference set, in
/// percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub reference: String,
    pub candidate: String,
    #[serde(serialize_with = "numfmt::serialize")]
    pub cross_pattern_strength: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub mid_freq_intensity: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub axis_asymmetry: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_coherence: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_transition_rate: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_entropy: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub zero_lag_checkerboard: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub spectrum_similarity: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub phase_similarity: f64,
}

impl ComparisonReport {
    pub fn percentages(&self) -> [f64; 9] {
        [
            self.cross_pattern_strength,
            self.mid_freq_intensity,
            self.axis_asymmetry,
            self.phase_coherence,
            self.phase_transition_rate,
            self.phase_entropy,
            self.zero_lag_checkerboard,
            self.spectrum_similarity,
            self.phase_similarity,
        ]
    }
}

/// `100·(1 − |a − b| / max(|a|, |b|, ε))`, clamped to `[0, 100]`.
pub fn relative_similarity(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs()).max(EPS);
    (100.0 * (1.0 - (a - b).abs() / denom)).clamp(0.0, 100.0)
}

pub fn compare(reference: &SetFingerprint, candidate: &SetFingerprint) -> Result<ComparisonReport> {
    let (r, c) = (&reference.summary, &candidate.summary);
    let sim = |a, b| relative_similarity(a, b);
    Ok(ComparisonReport {
        reference: r.label.clone(),
        candidate: c.label.clone(),
        cross_pattern_strength: sim(r.cross_pattern_strength, c.cross_pattern_strength),
        mid_freq_intensity: sim(r.mid_freq_intensity, c.mid_freq_intensity),
        axis_asymmetry: sim(r.axis_asymmetry, c.axis_asymmetry),
        phase_coherence: sim(r.phase_coherence, c.phase_coherence),
        phase_transition_rate: sim(r.phase_transition_rate, c.phase_transition_rate),
        phase_entropy: sim(r.phase_entropy, c.phase_entropy),
        zero_lag_checkerboard: sim(r.zero_lag_checkerboard, c.zero_lag_checkerboard),
        spectrum_similarity: spectrum_similarity(&reference.power, &candidate.power)?,
        phase_similarity: phase_structural_similarity(&reference.phase, &candidate.phase)?,
    })
}
