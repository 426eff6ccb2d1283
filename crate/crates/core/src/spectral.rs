//! Two-dimensional DFT, power and phase spectra, circular autocorrelation
//! and their dataset averages.
//!
//! The forward transform is unnormalized,
//! `X(k,l) = Σ x(m,n)·exp(−j2π(km/M + ln/N))`, with the DC term at index
//! `(0, 0)`. The inverse carries the `1/(M·N)` factor.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Plane;

/// Magnitudes below this are treated as exact zeros when taking phases.
pub const PHASE_NULL: f64 = 1e-12;
/// Zero-lag values below this leave an autocorrelation unnormalized.
pub const AUTOCORR_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    rows: usize,
    cols: usize,
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, k: usize, l: usize) -> Complex64 {
        self.values[k * self.cols + l]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Power,
    Phase,
    Autocorr,
    Generic,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Power => "power",
            MapKind::Phase => "phase",
            MapKind::Autocorr => "autocorr",
            MapKind::Generic => "generic",
        })
    }
}

/// Real-valued map over frequencies or lags.
///
/// `centered` is set once the DC / zero-lag cell has been moved to
/// `(rows/2, cols/2)`. `normalized` marks autocorrelations divided by
/// their zero-lag value.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMap {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    pub kind: MapKind,
    pub centered: bool,
    pub normalized: bool,
}

impl SpectralMap {
    /// Validates the kind-specific value ranges.
    pub fn new(
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        kind: MapKind,
        centered: bool,
        normalized: bool,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::InvalidValue(format!(
                "{} values for a {rows}x{cols} map",
                values.len()
            )));
        }
        let bad = match kind {
            MapKind::Power => values.iter().find(|v| !(0.0..).contains(*v)),
            MapKind::Phase => values
                .iter()
                .find(|v| !(-PI..=PI).contains(*v) || **v == -PI),
            MapKind::Autocorr if normalized => {
                values.iter().find(|v| v.is_nan() || v.abs() > 1.0 + 1e-9)
            }
            _ => None,
        };
        if let Some(v) = bad {
            return Err(Error::InvalidValue(format!(
                "{v} is not a valid {kind} value"
            )));
        }
        Ok(Self {
            rows,
            cols,
            values,
            kind,
            centered,
            normalized,
        })
    }

    pub fn generic(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(rows, cols, values, MapKind::Generic, false, false)
    }

    fn raw(rows: usize, cols: usize, values: Vec<f64>, kind: MapKind) -> Self {
        Self {
            rows,
            cols,
            values,
            kind,
            centered: false,
            normalized: false,
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Index of the DC / zero-lag cell under the current centering.
    pub fn origin(&self) -> (usize, usize) {
        if self.centered {
            (self.rows / 2, self.cols / 2)
        } else {
            (0, 0)
        }
    }
}

impl Plane for SpectralMap {
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

fn transpose<T: Copy>(data: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(data.len());
    for c in 0..cols {
        for r in 0..rows {
            out.push(data[r * cols + c]);
        }
    }
    out
}

fn fft2_in_place(data: &mut Vec<Complex64>, rows: usize, cols: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let plan = |planner: &mut FftPlanner<f64>, n| {
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    };
    // rustfft processes every consecutive chunk of `len` samples.
    plan(&mut planner, cols).process(data);
    let mut t = transpose(data, rows, cols);
    plan(&mut planner, rows).process(&mut t);
    *data = transpose(&t, cols, rows);
}

/// Unnormalized forward 2-D DFT.
pub fn dft2(field: &impl Plane) -> ComplexSpectrum {
    let (rows, cols) = field.shape();
    let mut data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft2_in_place(&mut data, rows, cols, false);
    ComplexSpectrum {
        rows,
        cols,
        values: data,
    }
}

/// Inverse 2-D DFT including the `1/(M·N)` factor.
pub fn idft2(spec: &ComplexSpectrum) -> Vec<Complex64> {
    let mut data = spec.values.clone();
    fft2_in_place(&mut data, spec.rows, spec.cols, true);
    let scale = 1.0 / (spec.rows * spec.cols) as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// `|X(k,l)|²`.
pub fn power_spectrum(spec: &ComplexSpectrum) -> SpectralMap {
    let values = spec.values.iter().map(|z| z.norm_sqr()).collect();
    SpectralMap::raw(spec.rows, spec.cols, values, MapKind::Power)
}

fn wrap_phase(angle: f64) -> f64 {
    if angle <= -PI {
        angle + 2.0 * PI
    } else {
        angle
    }
}

fn phase_of(z: Complex64) -> f64 {
    if z.norm() < PHASE_NULL {
        0.0
    } else {
        wrap_phase(z.im.atan2(z.re))
    }
}

/// `atan2(im, re)` per bin in `(−π, π]`; null bins get phase 0.
pub fn phase_spectrum(spec: &ComplexSpectrum) -> SpectralMap {
    let values = spec.values.iter().map(|&z| phase_of(z)).collect();
    SpectralMap::raw(spec.rows, spec.cols, values, MapKind::Phase)
}

fn check_uniform<T: Plane>(items: &[T]) -> Result<(usize, usize)> {
    let first = items.first().ok_or(Error::EmptyInput)?;
    let shape = first.shape();
    if let Some(bad) = items.iter().find(|p| p.shape() != shape) {
        return Err(Error::ShapeMismatch(
            shape.0,
            shape.1,
            bad.rows(),
            bad.cols(),
        ));
    }
    Ok(shape)
}

/// Items transformed concurrently per batch; reductions stay sequential.
const BATCH: usize = 32;

/// Sums per-item maps in input order. Items are transformed in parallel
/// batches; the reduction is sequential so the result does not depend on
/// the worker count.
fn ordered_mean<T, F>(items: &[T], per_item: F) -> Result<(usize, usize, Vec<f64>)>
where
    T: Plane + Sync,
    F: Fn(&T) -> Vec<f64> + Sync,
{
    let (rows, cols) = check_uniform(items)?;
    let mut acc = vec![0.0; rows * cols];
    for batch in items.chunks(BATCH) {
        let maps: Vec<Vec<f64>> = batch.par_iter().map(&per_item).collect();
        for map in &maps {
            add_into(&mut acc, map);
        }
    }
    scale_by_count(&mut acc, items.len());
    Ok((rows, cols, acc))
}

fn add_into(acc: &mut [f64], map: &[f64]) {
    for (a, v) in acc.iter_mut().zip(map) {
        *a += v;
    }
}

fn scale_by_count(acc: &mut [f64], count: usize) {
    let inv = 1.0 / count as f64;
    for a in acc {
        *a *= inv;
    }
}

fn unit_phasors(spec: &ComplexSpectrum) -> Vec<Complex64> {
    spec.values
        .iter()
        .map(|&z| {
            let n = z.norm();
            if n < PHASE_NULL {
                Complex64::new(0.0, 0.0)
            } else {
                z / n
            }
        })
        .collect()
}

/// Dataset-averaged power spectrum `(1/I)·Σ|X_i|²`.
pub fn mean_power_spectrum<T: Plane + Sync>(items: &[T]) -> Result<SpectralMap> {
    let (rows, cols, acc) = ordered_mean(items, |p| power_spectrum(&dft2(p)).into_values())?;
    Ok(SpectralMap::raw(rows, cols, acc, MapKind::Power))
}

/// Per-bin circular mean of the phase spectra: the argument of the sum of
/// unit phasors `X_i/|X_i|`. Null bins contribute nothing; bins whose
/// phasor sum vanishes get phase 0.
pub fn mean_phase_spectrum<T: Plane + Sync>(items: &[T]) -> Result<SpectralMap> {
    let (rows, cols) = check_uniform(items)?;
    let mut acc = SetAccumulator::new(rows, cols);
    acc.push_batch(items)?;
    Ok(acc.phase())
}

/// Averaged spectra of one image set, with DC / zero lag at `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSpectra {
    pub power: SpectralMap,
    pub phase: SpectralMap,
    pub autocorr: SpectralMap,
}

/// Streaming accumulator for power, phase and autocorrelation averages.
///
/// Each pushed item costs one forward and one inverse transform. Batches
/// are transformed in parallel and folded in push order, so results are
/// bit-identical to [`mean_power_spectrum`] and [`mean_autocorrelation`]
/// over the same sequence regardless of thread count.
#[derive(Debug, Clone)]
pub struct SetAccumulator {
    rows: usize,
    cols: usize,
    count: usize,
    power: Vec<f64>,
    phasors: Vec<Complex64>,
    autocorr: Vec<f64>,
}

impl SetAccumulator {
    pub fn new(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        Self {
            rows,
            cols,
            count: 0,
            power: vec![0.0; n],
            phasors: vec![Complex64::new(0.0, 0.0); n],
            autocorr: vec![0.0; n],
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn push_batch<T: Plane + Sync>(&mut self, items: &[T]) -> Result<()> {
        if let Some(bad) = items.iter().find(|p| p.shape() != (self.rows, self.cols)) {
            return Err(Error::ShapeMismatch(
                self.rows,
                self.cols,
                bad.rows(),
                bad.cols(),
            ));
        }
        for batch in items.chunks(BATCH) {
            let parts: Vec<(Vec<f64>, Vec<Complex64>, Vec<f64>)> = batch
                .par_iter()
                .map(|p| {
                    let spec = dft2(p);
                    let phasors = unit_phasors(&spec);
                    let power = power_spectrum(&spec);
                    let autocorr = autocorr_from_power(&power);
                    (power.into_values(), phasors, autocorr)
                })
                .collect();
            for (power, phasors, autocorr) in &parts {
                add_into(&mut self.power, power);
                add_into(&mut self.autocorr, autocorr);
                for (a, z) in self.phasors.iter_mut().zip(phasors) {
                    *a += z;
                }
            }
            self.count += batch.len();
        }
        Ok(())
    }

    fn phase(&self) -> SpectralMap {
        let values = self.phasors.iter().map(|&z| phase_of(z)).collect();
        SpectralMap::raw(self.rows, self.cols, values, MapKind::Phase)
    }

    pub fn finish(self) -> Result<SetSpectra> {
        if self.count == 0 {
            return Err(Error::EmptyInput);
        }
        let phase = self.phase();
        let (mut power, mut autocorr) = (self.power, self.autocorr);
        scale_by_count(&mut power, self.count);
        scale_by_count(&mut autocorr, self.count);
        Ok(SetSpectra {
            power: SpectralMap::raw(self.rows, self.cols, power, MapKind::Power),
            phase,
            autocorr: normalize_autocorr(self.rows, self.cols, autocorr),
        })
    }
}

fn autocorr_sums(field: &impl Plane) -> Vec<f64> {
    autocorr_from_power(&power_spectrum(&dft2(field)))
}

fn autocorr_from_power(power: &SpectralMap) -> Vec<f64> {
    let spec = ComplexSpectrum {
        rows: power.rows,
        cols: power.cols,
        values: power
            .values
            .iter()
            .map(|&p| Complex64::new(p, 0.0))
            .collect(),
    };
    let n = (power.rows * power.cols) as f64;
    idft2(&spec).into_iter().map(|z| z.re / n).collect()
}

fn normalize_autocorr(rows: usize, cols: usize, mut values: Vec<f64>) -> SpectralMap {
    let zero_lag = values[0];
    if zero_lag < AUTOCORR_FLOOR {
        return SpectralMap::raw(rows, cols, values, MapKind::Autocorr);
    }
    for v in &mut values {
        *v = (*v / zero_lag).clamp(-1.0, 1.0);
    }
    values[0] = 1.0;
    let mut map = SpectralMap::raw(rows, cols, values, MapKind::Autocorr);
    map.normalized = true;
    map
}

/// Circular autocorrelation
/// `R(Δm,Δn) = (1/(M·N))·Σ x(m,n)·x((m+Δm) mod M, (n+Δn) mod N)`,
/// computed as the inverse transform of the power spectrum. Zero lag
/// sits at `(0, 0)`.
pub fn autocorrelation_raw(field: &impl Plane) -> SpectralMap {
    SpectralMap::raw(
        field.rows(),
        field.cols(),
        autocorr_sums(field),
        MapKind::Autocorr,
    )
}

/// [`autocorrelation_raw`] divided by its zero-lag value. If that value is
/// below [`AUTOCORR_FLOOR`] the map stays unnormalized (`normalized =
/// false`).
pub fn autocorrelation(field: &impl Plane) -> SpectralMap {
    normalize_autocorr(field.rows(), field.cols(), autocorr_sums(field))
}

/// Averages the unnormalized per-item autocorrelations, then normalizes by
/// the averaged zero-lag value.
pub fn mean_autocorrelation<T: Plane + Sync>(items: &[T]) -> Result<SpectralMap> {
    let (rows, cols, acc) = ordered_mean(items, autocorr_sums)?;
    Ok(normalize_autocorr(rows, cols, acc))
}

/// Quadrant swap moving `(0, 0)` to `(rows/2, cols/2)`.
pub fn center_shift(map: &SpectralMap) -> Result<SpectralMap> {
    if map.centered {
        return Err(Error::AlreadyCentered);
    }
    let (rows, cols) = map.shape();
    let (dr, dc) = (rows / 2, cols / 2);
    let mut values = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            values[((r + dr) % rows) * cols + (c + dc) % cols] = map.values[r * cols + c];
        }
    }
    Ok(SpectralMap {
        values,
        centered: true,
        ..map.clone()
    })
}

/// Odd `side × side` window around the DC / zero-lag cell of a centered map.
pub fn central_crop(map: &SpectralMap, side: usize) -> Result<SpectralMap> {
    let max = map.rows.min(map.cols);
    if side.is_multiple_of(2) || side > max {
        return Err(Error::BadSide { side, max });
    }
    if !map.centered {
        return Err(Error::NotCentered);
    }
    let (cr, cc) = map.origin();
    let half = side / 2;
    let mut values = Vec::with_capacity(side * side);
    for r in cr - half..=cr + half {
        values.extend_from_slice(&map.values[r * map.cols + cc - half..=r * map.cols + cc + half]);
    }
    Ok(SpectralMap {
        rows: side,
        cols: side,
        values,
        ..map.clone()
    })
}

/// Min–max normalization into `[0, 1]`; a constant map becomes all zeros.
pub(crate) fn min_max(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return vec![0.0; values.len()];
    }
    let span = hi - lo;
    values.iter().map(|v| (v - lo) / span).collect()
}

/// Display transform for power maps: `log(1 + v)` followed by min–max
/// normalization.
pub fn log_normalize(map: &SpectralMap) -> SpectralMap {
    let logged: Vec<f64> = map.values.iter().map(|v| v.ln_1p()).collect();
    SpectralMap {
        values: min_max(&logged),
        kind: MapKind::Generic,
        normalized: false,
        ..map.clone()
    }
}
