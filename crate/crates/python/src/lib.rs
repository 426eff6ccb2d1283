//! Python bindings for `specprint`.

use std::path::Path;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use specprint::fingerprint::{self, FingerprintSummary, SetFingerprint};
use specprint::ingest::{self, DatasetManifest};
use specprint::metrics::{self, MetricRecord};
use specprint::pipeline::{self, AnalysisConfig, Source};
use specprint::{render, residual, spectral, Error, Plane};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

fn rows_of(plane: &impl Plane) -> Vec<Vec<f64>> {
    plane
        .values()
        .chunks(plane.cols())
        .map(<[f64]>::to_vec)
        .collect()
}

fn flatten(rows: Vec<Vec<f64>>) -> PyResult<(usize, usize, Vec<f64>)> {
    let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("rows must all have the same length"));
    }
    Ok((r, c, rows.into_iter().flatten().collect()))
}

/// Grayscale image with values in [0, 1].
#[pyclass(name = "GrayImage", module = "specprint_py", frozen)]
struct PyGrayImage(specprint::GrayImage);

#[pymethods]
impl PyGrayImage {
    /// Builds an image from a list of equally long rows.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let (r, c, values) = flatten(rows)?;
        specprint::GrayImage::new(r, c, values)
            .map(Self)
            .map_err(py_err)
    }

    /// Decodes a PNG or JPEG file and standardizes it to `size`×`size`.
    #[staticmethod]
    #[pyo3(signature = (path, size = ingest::DEFAULT_ANALYSIS_SIZE))]
    fn load(path: &str, size: usize) -> PyResult<Self> {
        ingest::load_gray(path, size).map(Self).map_err(py_err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        rows_of(&self.0)
    }

    /// Center crop to a square, then bilinear resample to `size`×`size`.
    fn standardize(&self, size: usize) -> PyResult<Self> {
        ingest::standardize(&self.0, size).map(Self).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("GrayImage({}x{})", self.0.rows(), self.0.cols())
    }
}

/// Zero-mean residual field.
#[pyclass(name = "Residual", module = "specprint_py", frozen)]
struct PyResidual(residual::Residual);

#[pymethods]
impl PyResidual {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let (r, c, values) = flatten(rows)?;
        residual::Residual::new(r, c, values)
            .map(Self)
            .map_err(py_err)
    }

    /// Wraps an image unchanged, for analysing raw pixels.
    #[staticmethod]
    fn from_image(img: &PyGrayImage) -> Self {
        Self(residual::Residual::from_image(&img.0))
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        rows_of(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Residual({}x{})", self.0.rows(), self.0.cols())
    }
}

/// Real-valued spectral map with kind and layout flags.
#[pyclass(name = "SpectralMap", module = "specprint_py", frozen)]
struct PySpectralMap(spectral::SpectralMap);

fn kind_from_str(kind: &str) -> PyResult<spectral::MapKind> {
    use spectral::MapKind;
    match kind {
        "power" => Ok(MapKind::Power),
        "phase" => Ok(MapKind::Phase),
        "autocorr" => Ok(MapKind::Autocorr),
        "generic" => Ok(MapKind::Generic),
        _ => Err(PyValueError::new_err(format!("unknown map kind {kind:?}"))),
    }
}

#[pymethods]
impl PySpectralMap {
    #[new]
    #[pyo3(signature = (rows, kind = "generic", centered = false, normalized = false))]
    fn new(rows: Vec<Vec<f64>>, kind: &str, centered: bool, normalized: bool) -> PyResult<Self> {
        let (r, c, values) = flatten(rows)?;
        spectral::SpectralMap::new(r, c, values, kind_from_str(kind)?, centered, normalized)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind.to_string()
    }

    #[getter]
    fn centered(&self) -> bool {
        self.0.centered
    }

    #[getter]
    fn normalized(&self) -> bool {
        self.0.normalized
    }

    fn at(&self, row: usize, col: usize) -> PyResult<f64> {
        let (r, c) = self.0.shape();
        if row >= r || col >= c {
            return Err(PyValueError::new_err(format!(
                "({row}, {col}) outside {r}x{c} map"
            )));
        }
        Ok(self.0.at(row, col))
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        rows_of(&self.0)
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.0.shape();
        format!(
            "SpectralMap({r}x{c}, kind={}, centered={}, normalized={})",
            self.0.kind, self.0.centered, self.0.normalized
        )
    }
}

/// Averaged maps of an image set together with their summary statistics.
#[pyclass(name = "SetFingerprint", module = "specprint_py", frozen)]
struct PySetFingerprint(SetFingerprint);

fn summary_dict<'py>(py: Python<'py>, s: &FingerprintSummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("label", &s.label)?;
    for (name, v) in s.scalars() {
        d.set_item(name, v)?;
    }
    Ok(d)
}

#[pymethods]
impl PySetFingerprint {
    #[getter]
    fn label(&self) -> String {
        self.0.summary.label.clone()
    }

    #[getter]
    fn power(&self) -> PySpectralMap {
        PySpectralMap(self.0.power.clone())
    }

    #[getter]
    fn phase(&self) -> PySpectralMap {
        PySpectralMap(self.0.phase.clone())
    }

    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        summary_dict(py, &self.0.summary)
    }

    /// Similarity percentages of `candidate` to this set.
    fn compare<'py>(
        &self,
        py: Python<'py>,
        candidate: &PySetFingerprint,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = fingerprint::compare(&self.0, &candidate.0).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("reference", &report.reference)?;
        d.set_item("candidate", &report.candidate)?;
        let names = [
            "cross_pattern_strength",
            "mid_freq_intensity",
            "axis_asymmetry",
            "phase_coherence",
            "phase_transition_rate",
            "phase_entropy",
            "zero_lag_checkerboard",
            "spectrum_similarity",
            "phase_similarity",
        ];
        for (name, v) in names.into_iter().zip(report.percentages()) {
            d.set_item(name, v)?;
        }
        Ok(d)
    }
}

fn record_dict<'py>(py: Python<'py>, r: &MetricRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("stem", &r.stem)?;
    d.set_item("mse", r.mse)?;
    d.set_item("psnr", r.psnr)?;
    d.set_item("ssim", r.ssim)?;
    d.set_item("hist_corr", r.hist_corr)?;
    Ok(d)
}

#[pyfunction]
fn mse(a: &PyGrayImage, b: &PyGrayImage) -> PyResult<f64> {
    metrics::mse(&a.0, &b.0).map_err(py_err)
}

#[pyfunction]
fn psnr(a: &PyGrayImage, b: &PyGrayImage) -> PyResult<f64> {
    metrics::psnr(&a.0, &b.0).map_err(py_err)
}

#[pyfunction]
fn ssim(a: &PyGrayImage, b: &PyGrayImage) -> PyResult<f64> {
    metrics::ssim(&a.0, &b.0).map_err(py_err)
}

#[pyfunction]
fn hist_correlation(a: &PyGrayImage, b: &PyGrayImage) -> f64 {
    metrics::hist_correlation(&a.0, &b.0)
}

/// Applies `identity`, `gaussian:<sigma>` or `median:<radius>`.
#[pyfunction]
#[pyo3(signature = (img, denoiser = "gaussian:1"))]
fn denoise(img: &PyGrayImage, denoiser: &str) -> PyResult<PyGrayImage> {
    residual::denoise(&img.0, parse(denoiser)?)
        .map(PyGrayImage)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "residual", signature = (img, denoiser = "gaussian:1"))]
fn residual_of(img: &PyGrayImage, denoiser: &str) -> PyResult<PyResidual> {
    residual::residual(&img.0, parse(denoiser)?)
        .map(PyResidual)
        .map_err(py_err)
}

#[pyfunction]
fn power_spectrum(field: &PyResidual) -> PySpectralMap {
    PySpectralMap(spectral::power_spectrum(&spectral::dft2(&field.0)))
}

#[pyfunction]
fn phase_spectrum(field: &PyResidual) -> PySpectralMap {
    PySpectralMap(spectral::phase_spectrum(&spectral::dft2(&field.0)))
}

#[pyfunction]
fn autocorrelation(field: &PyResidual) -> PySpectralMap {
    PySpectralMap(spectral::autocorrelation(&field.0))
}

fn owned(fields: Vec<PyRef<'_, PyResidual>>) -> Vec<residual::Residual> {
    fields.iter().map(|f| f.0.clone()).collect()
}

#[pyfunction]
fn mean_power_spectrum(fields: Vec<PyRef<'_, PyResidual>>) -> PyResult<PySpectralMap> {
    spectral::mean_power_spectrum(&owned(fields))
        .map(PySpectralMap)
        .map_err(py_err)
}

#[pyfunction]
fn mean_phase_spectrum(fields: Vec<PyRef<'_, PyResidual>>) -> PyResult<PySpectralMap> {
    spectral::mean_phase_spectrum(&owned(fields))
        .map(PySpectralMap)
        .map_err(py_err)
}

#[pyfunction]
fn mean_autocorrelation(fields: Vec<PyRef<'_, PyResidual>>) -> PyResult<PySpectralMap> {
    spectral::mean_autocorrelation(&owned(fields))
        .map(PySpectralMap)
        .map_err(py_err)
}

#[pyfunction]
fn center_shift(map: &PySpectralMap) -> PyResult<PySpectralMap> {
    spectral::center_shift(&map.0)
        .map(PySpectralMap)
        .map_err(py_err)
}

#[pyfunction]
fn central_crop(map: &PySpectralMap, side: usize) -> PyResult<PySpectralMap> {
    spectral::central_crop(&map.0, side)
        .map(PySpectralMap)
        .map_err(py_err)
}

#[pyfunction]
fn log_normalize(map: &PySpectralMap) -> PySpectralMap {
    PySpectralMap(spectral::log_normalize(&map.0))
}

#[pyfunction]
fn zero_lag_checkerboard(map: &PySpectralMap) -> PyResult<f64> {
    fingerprint::zero_lag_checkerboard(&map.0).map_err(py_err)
}

/// Averages the fields' spectra and summarizes them under `label`.
#[pyfunction]
fn fingerprint_fields(
    fields: Vec<PyRef<'_, PyResidual>>,
    label: &str,
) -> PyResult<PySetFingerprint> {
    let maps = pipeline::field_maps(&owned(fields)).map_err(py_err)?;
    pipeline::fingerprint(&maps, label)
        .map(PySetFingerprint)
        .map_err(py_err)
}

/// Loads the images at `paths` and fingerprints them as one set.
#[pyfunction]
#[pyo3(signature = (paths, label, size = ingest::DEFAULT_ANALYSIS_SIZE, denoiser = "gaussian:1", source = "residual"))]
fn fingerprint_files(
    paths: Vec<String>,
    label: &str,
    size: usize,
    denoiser: &str,
    source: &str,
) -> PyResult<PySetFingerprint> {
    let config = AnalysisConfig {
        analysis_size: size,
        denoiser: parse(denoiser)?,
        source: parse::<Source>(source)?,
        ..AnalysisConfig::default()
    };
    let paths: Vec<&Path> = paths.iter().map(Path::new).collect();
    let maps = pipeline::set_maps(&paths, &config).map_err(py_err)?;
    pipeline::fingerprint(&maps, label)
        .map(PySetFingerprint)
        .map_err(py_err)
}

#[pyfunction]
fn write_matrix(map: &PySpectralMap, path: &str) -> PyResult<()> {
    render::write_matrix(&map.0, path).map_err(py_err)
}

#[pyfunction]
fn read_matrix(path: &str) -> PyResult<PySpectralMap> {
    render::read_matrix(path).map(PySpectralMap).map_err(py_err)
}

/// Writes a min-max normalized 8-bit grayscale PNG.
#[pyfunction]
fn heatmap_png(map: &PySpectralMap, path: &str) -> PyResult<()> {
    render::heatmap_png(&map.0, path).map_err(py_err)
}

/// Scans both directories and returns the manifest as JSON text.
#[pyfunction]
#[pyo3(signature = (real_dir, generated_dir, generator, noise_level = None, size = ingest::DEFAULT_ANALYSIS_SIZE))]
fn build_manifest(
    real_dir: &str,
    generated_dir: &str,
    generator: &str,
    noise_level: Option<f64>,
    size: usize,
) -> PyResult<String> {
    ingest::build_manifest(
        Path::new(real_dir),
        Path::new(generated_dir),
        generator,
        noise_level,
        size,
    )
    .and_then(|m| m.to_json())
    .map_err(py_err)
}

/// Fidelity metrics for every stem-matched pair of a manifest file.
#[pyfunction]
#[pyo3(signature = (manifest_path, size = None))]
fn pair_metrics<'py>(
    py: Python<'py>,
    manifest_path: &str,
    size: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let manifest = DatasetManifest::load(manifest_path).map_err(py_err)?;
    let records = pipeline::pair_metrics(&manifest, size.unwrap_or(manifest.analysis_size))
        .map_err(py_err)?;
    records.iter().map(|r| record_dict(py, r)).collect()
}

#[pymodule]
fn specprint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrayImage>()?;
    m.add_class::<PyResidual>()?;
    m.add_class::<PySpectralMap>()?;
    m.add_class::<PySetFingerprint>()?;
    m.add_function(wrap_pyfunction!(mse, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(ssim, m)?)?;
    m.add_function(wrap_pyfunction!(hist_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(denoise, m)?)?;
    m.add_function(wrap_pyfunction!(residual_of, m)?)?;
    m.add_function(wrap_pyfunction!(power_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(phase_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(mean_power_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(mean_phase_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(mean_autocorrelation, m)?)?;
    m.add_function(wrap_pyfunction!(center_shift, m)?)?;
    m.add_function(wrap_pyfunction!(central_crop, m)?)?;
    m.add_function(wrap_pyfunction!(log_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(zero_lag_checkerboard, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint_fields, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint_files, m)?)?;
    m.add_function(wrap_pyfunction!(write_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(read_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(heatmap_png, m)?)?;
    m.add_function(wrap_pyfunction!(build_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(pair_metrics, m)?)?;
    m.add("PHASE_BINS", fingerprint::PHASE_BINS)?;
    m.add("DEFAULT_ANALYSIS_SIZE", ingest::DEFAULT_ANALYSIS_SIZE)?;
    Ok(())
}
