//! MAT1 matrix files, grayscale heatmaps and JSON reports.
//!
//! MAT1 layout: the ASCII header `MAT1 <rows> <cols>\n` followed by
//! `rows·cols` little-endian binary64 values in row-major order. Map
//! flags live in a sidecar `<path>.meta.json`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingerprint::{ComparisonReport, FingerprintSummary};
use crate::ingest::DatasetManifest;
use crate::metrics::{AggregateStats, MetricRecord};
use crate::raster::Plane;
use crate::spectral::{min_max, MapKind, SpectralMap};

const MAGIC: &str = "MAT1";
const MAX_HEADER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct MapMeta {
    kind: MapKind,
    centered: bool,
    normalized: bool,
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Serializes a matrix to MAT1 bytes.
pub fn encode_matrix(map: &impl Plane) -> Vec<u8> {
    let header = format!("{MAGIC} {} {}\n", map.rows(), map.cols());
    let mut out = Vec::with_capacity(header.len() + 8 * map.values().len());
    out.extend_from_slice(header.as_bytes());
    for v in map.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses MAT1 bytes into `(rows, cols, values)`.
pub fn decode_matrix(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
    let newline = bytes
        .iter()
        .take(MAX_HEADER)
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("MAT1 header line missing".into()))?;
    let header = std::str::from_utf8(&bytes[..newline])
        .map_err(|_| Error::Format("MAT1 header is not ASCII".into()))?;
    let mut parts = header.split(' ');
    if parts.next() != Some(MAGIC) {
        return Err(Error::Format(format!("bad magic in header {header:?}")));
    }
    let mut dim = || -> Result<usize> {
        parts
            .next()
            .and_then(|s| s.parse().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::Format(format!("bad dimensions in header {header:?}")))
    };
    let (rows, cols) = (dim()?, dim()?);
    if parts.next().is_some() {
        return Err(Error::Format(format!(
            "trailing fields in header {header:?}"
        )));
    }
    let body = &bytes[newline + 1..];
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::Format("dimensions overflow".into()))?;
    if body.len() != expected {
        return Err(Error::Format(format!(
            "body holds {} bytes, {rows}x{cols} needs {expected}",
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok((rows, cols, values))
}

/// Writes the MAT1 file and its `.meta.json` sidecar.
pub fn write_matrix(map: &SpectralMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_matrix(map)).map_err(|e| Error::io(path, e))?;
    let meta = MapMeta {
        kind: map.kind,
        centered: map.centered,
        normalized: map.normalized,
    };
    let meta_file = meta_path(path);
    let mut text = serde_json::to_string(&meta)?;
    text.push('\n');
    fs::write(&meta_file, text).map_err(|e| Error::io(meta_file, e))
}

/// Reads a MAT1 file. Without a sidecar the map is treated as an
/// uncentered generic map.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<SpectralMap> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (rows, cols, values) = decode_matrix(&bytes)?;
    let meta_file = meta_path(path);
    let meta = match fs::read_to_string(&meta_file) {
        Ok(text) => serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("{}: {e}", meta_file.display())))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => MapMeta {
            kind: MapKind::Generic,
            centered: false,
            normalized: false,
        },
        Err(e) => return Err(Error::io(meta_file, e)),
    };
    SpectralMap::new(
        rows,
        cols,
        values,
        meta.kind,
        meta.centered,
        meta.normalized,
    )
    .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Min–max normalizes and quantizes to 8 bits:
/// `q = clamp(floor(v·255 + 0.5), 0, 255)`.
pub fn heatmap_pixels(map: &impl Plane) -> Result<Vec<u8>> {
    if map.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidValue("heatmap needs finite values".into()));
    }
    Ok(min_max(map.values())
        .into_iter()
        .map(|v| (v * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8)
        .collect())
}

pub fn encode_heatmap_png(map: &impl Plane) -> Result<Vec<u8>> {
    let pixels = heatmap_pixels(map)?;
    let mut out = Vec::new();
    let (w, h) = (
        u32::try_from(map.cols()).map_err(|_| Error::InvalidValue("map too wide".into()))?,
        u32::try_from(map.rows()).map_err(|_| Error::InvalidValue("map too tall".into()))?,
    );
    PngEncoder::new(&mut out)
        .write_image(&pixels, w, h, ExtendedColorType::L8)
        .map_err(|e| Error::Format(format!("png encoding: {e}")))?;
    Ok(out)
}

/// Writes an 8-bit grayscale PNG of the map.
pub fn heatmap_png(map: &impl Plane, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_heatmap_png(map)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Top-level report document.
#[derive(Debug, Clone, Serialize)]
pub struct Report<'a, C: Serialize> {
    pub manifest: &'a DatasetManifest,
    pub metrics: &'a [MetricRecord],
    pub aggregates: &'a [AggregateStats],
    pub fingerprints: &'a [FingerprintSummary],
    pub comparisons: &'a [ComparisonReport],
    pub config: &'a C,
}

pub fn report_json<C: Serialize>(report: &Report<'_, C>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn write_report<C: Serialize>(report: &Report<'_, C>, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &report_json(report)?)
}

pub(crate) fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_zero_layout() {
        let m = SpectralMap::generic(1, 1, vec![0.0]).unwrap();
        let bytes = encode_matrix(&m);
        assert_eq!(&bytes[..9], b"MAT1 1 1\n");
        assert_eq!(bytes.len(), 9 + 8);
        assert!(bytes[9..].iter().all(|&b| b == 0));
    }

    #[test]
    fn file_round_trip_keeps_flags() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.mat");
        let values: Vec<f64> = (0..64).map(|i| (i as f64 - 20.0) * 0.37).collect();
        let mut m = SpectralMap::new(8, 8, values, MapKind::Autocorr, false, false).unwrap();
        m.centered = true;
        write_matrix(&m, &p).unwrap();
        let back = read_matrix(&p).unwrap();
        assert_eq!(back.kind, MapKind::Autocorr);
        assert!(back.centered && !back.normalized);
        for (a, b) in back.values().iter().zip(m.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let meta = fs::read_to_string(meta_path(&p)).unwrap();
        assert_eq!(
            meta,
            "{\"kind\":\"autocorr\",\"centered\":true,\"normalized\":false}\n"
        );
    }

    #[test]
    fn missing_sidecar_defaults_to_generic() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bare.mat");
        fs::write(
            &p,
            encode_matrix(&SpectralMap::generic(1, 2, vec![1.0, -2.0]).unwrap()),
        )
        .unwrap();
        let m = read_matrix(&p).unwrap();
        assert_eq!(m.kind, MapKind::Generic);
        assert_eq!(m.values(), &[1.0, -2.0]);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let m = SpectralMap::generic(1, 1, vec![0.0]).unwrap();
        let err = write_matrix(&m, "/nonexistent-dir/x.mat").unwrap_err();
        assert_eq!(err.kind(), "IoError");
    }

    #[test]
    fn rejects_bad_files() {
        let good = encode_matrix(&SpectralMap::generic(2, 2, vec![1.0; 4]).unwrap());
        let mut wrong_magic = good.clone();
        wrong_magic[3] = b'2';
        assert!(matches!(decode_matrix(&wrong_magic), Err(Error::Format(_))));
        assert!(matches!(
            decode_matrix(&good[..good.len() - 3]),
            Err(Error::Format(_))
        ));
        let mut extra = good.clone();
        extra.push(0);
        assert!(decode_matrix(&extra).is_err());
        assert!(decode_matrix(b"MAT1 0 3\n").is_err());
        assert!(decode_matrix(b"MAT1 2\n").is_err());
        assert!(decode_matrix(b"no newline at all").is_err());
    }

    #[test]
    fn heatmap_quantization() {
        let flat = SpectralMap::generic(2, 3, vec![4.0; 6]).unwrap();
        assert_eq!(heatmap_pixels(&flat).unwrap(), vec![0; 6]);
        let pair = SpectralMap::generic(1, 2, vec![0.0, 1.0]).unwrap();
        assert_eq!(heatmap_pixels(&pair).unwrap(), vec![0, 255]);
        let mid = SpectralMap::generic(1, 3, vec![0.0, 0.5, 1.0]).unwrap();
        // 0.5·255 + 0.5 = 128
        assert_eq!(heatmap_pixels(&mid).unwrap(), vec![0, 128, 255]);
        let nan = SpectralMap::generic(1, 2, vec![0.0, f64::NAN]).unwrap();
        assert!(heatmap_pixels(&nan).is_err());
    }

    #[test]
    fn heatmap_png_decodes_to_same_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.png");
        let m = SpectralMap::generic(3, 5, (0..15).map(f64::from).collect()).unwrap();
        heatmap_png(&m, &p).unwrap();
        let img = image::open(&p).unwrap().into_luma8();
        assert_eq!((img.width(), img.height()), (5, 3));
        assert_eq!(img.into_raw(), heatmap_pixels(&m).unwrap());
    }

    #[test]
    fn empty_report_sections() {
        let manifest = DatasetManifest {
            analysis_size: 4,
            entries: vec![],
        };
        let report = Report {
            manifest: &manifest,
            metrics: &[],
            aggregates: &[],
            fingerprints: &[],
            comparisons: &[],
            config: &serde_json::json!({"crop": 65}),
        };
        let text = report_json(&report).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metrics"], serde_json::json!([]));
        assert_eq!(v.as_object().unwrap().len(), 6);
        let positions: Vec<usize> = [
            "manifest",
            "metrics",
            "aggregates",
            "fingerprints",
            "comparisons",
            "config",
        ]
        .iter()
        .map(|k| text.find(&format!("\"{k}\":")).unwrap())
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    }

    #[test]
    fn report_metric_record_has_four_metric_keys() {
        let manifest = DatasetManifest {
            analysis_size: 4,
            entries: vec![],
        };
        let rec = MetricRecord {
            stem: "a".into(),
            mse: 0.0,
            psnr: f64::INFINITY,
            ssim: 1.0,
            hist_corr: 1.0,
        };
        let report = Report {
            manifest: &manifest,
            metrics: std::slice::from_ref(&rec),
            aggregates: &[],
            fingerprints: &[],
            comparisons: &[],
            config: &(),
        };
        let text = report_json(&report).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = v["metrics"][0].as_object().unwrap();
        assert_eq!(obj.len(), 5);
        assert_eq!(obj["psnr"], "inf");
        assert_eq!(obj["mse"], 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mat1_round_trip_is_bitwise(
                (rows, cols, bits) in (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
                    (Just(r), Just(c), proptest::collection::vec(any::<u64>(), r * c))
                })
            ) {
                let values: Vec<f64> = bits.iter().map(|&b| f64::from_bits(b)).collect();
                let m = SpectralMap::generic(rows, cols, values).unwrap();
                let (r, c, back) = decode_matrix(&encode_matrix(&m)).unwrap();
                prop_assert_eq!((r, c), (rows, cols));
                let back_bits: Vec<u64> = back.iter().map(|v| v.to_bits()).collect();
                prop_assert_eq!(back_bits, bits);
            }
        }
    }
}
