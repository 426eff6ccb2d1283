//! Image decoding, grayscale conversion, standardization and dataset
//! manifests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat, ImageReader};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{GrayImage, Plane, RgbImage};

pub const DEFAULT_ANALYSIS_SIZE: usize = 256;

const NOISE_LEVELS: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

/// Decodes a PNG or JPEG file into 8-bit sRGB.
///
/// 16-bit sources keep their high byte. Alpha is composited over white.
pub fn decode_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|e| Error::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Jpeg) => {}
        other => {
            return Err(Error::Format(format!(
                "{}: unsupported encoding {other:?}",
                path.display()
            )))
        }
    }
    let decoded = reader
        .decode()
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    Ok(flatten_rgba(&decoded))
}

fn flatten_rgba(img: &DynamicImage) -> RgbImage {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let rgba: Vec<[u8; 4]> = if img.color().bytes_per_pixel() / img.color().channel_count() >= 2 {
        img.to_rgba16()
            .pixels()
            .map(|p| p.0.map(|c| (c >> 8) as u8))
            .collect()
    } else {
        img.to_rgba8().pixels().map(|p| p.0).collect()
    };
    let pixels = rgba.into_iter().map(composite_over_white).collect();
    RgbImage::new(w, h, pixels).expect("decoder returned consistent dimensions")
}

fn composite_over_white([r, g, b, a]: [u8; 4]) -> [u8; 3] {
    if a == 255 {
        return [r, g, b];
    }
    let alpha = f64::from(a) / 255.0;
    let blend = |c: u8| (f64::from(c) * alpha + 255.0 * (1.0 - alpha)).round() as u8;
    [blend(r), blend(g), blend(b)]
}

/// BT.601 luma, scaled into `[0, 1]`.
pub fn to_gray(img: &RgbImage) -> GrayImage {
    let values = img
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            (0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b)) / 255.0
        })
        .collect();
    GrayImage::from_clamped(img.height(), img.width(), values)
}

/// Center-crops to the largest square and bilinearly resamples it to
/// `analysis_size × analysis_size`.
///
/// Sampling is pixel-center aligned: output pixel `i` reads source
/// coordinate `(i + 0.5)·side/size − 0.5`, clamped to the source grid.
pub fn standardize(img: &GrayImage, analysis_size: usize) -> Result<GrayImage> {
    if analysis_size < 2 {
        return Err(Error::InvalidValue(format!(
            "analysis size must be at least 2, got {analysis_size}"
        )));
    }
    let (rows, cols) = img.shape();
    if rows < 2 || cols < 2 {
        return Err(Error::DegenerateImage { rows, cols });
    }
    let side = rows.min(cols);
    let top = (rows - side) / 2;
    let left = (cols - side) / 2;
    if rows == cols && side == analysis_size {
        return Ok(img.clone());
    }

    let src = img.values();
    let at = |r: usize, c: usize| src[(top + r) * cols + left + c];
    let scale = side as f64 / analysis_size as f64;
    let max = (side - 1) as f64;
    let coords: Vec<(usize, usize, f64)> = (0..analysis_size)
        .map(|i| {
            let s = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, max);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(side - 1);
            (lo, hi, s - lo as f64)
        })
        .collect();

    let mut out = Vec::with_capacity(analysis_size * analysis_size);
    for &(y0, y1, fy) in &coords {
        for &(x0, x1, fx) in &coords {
            let top_row = lerp(at(y0, x0), at(y0, x1), fx);
            let bottom_row = lerp(at(y1, x0), at(y1, x1), fx);
            out.push(lerp(top_row, bottom_row, fy));
        }
    }
    Ok(GrayImage::from_clamped(analysis_size, analysis_size, out))
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Decode, convert to luminance and standardize in one step.
pub fn load_gray(path: impl AsRef<Path>, analysis_size: usize) -> Result<GrayImage> {
    standardize(&to_gray(&decode_image(path)?), analysis_size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetLabel {
    Real,
    Generated,
}

impl SetLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SetLabel::Real => "real",
            SetLabel::Generated => "generated",
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub set: SetLabel,
    pub generator: String,
    pub noise_level: Option<f64>,
    pub stem: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub analysis_size: usize,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn set(&self, label: SetLabel) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.set == label)
    }

    /// Number of images in one set.
    pub fn count(&self, label: SetLabel) -> usize {
        self.set(label).count()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let manifest: Self = serde_json::from_str(text)?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    fn validate(&self) -> Result<()> {
        for label in [SetLabel::Real, SetLabel::Generated] {
            let mut seen = BTreeSet::new();
            for e in self.set(label) {
                if !seen.insert(e.stem.as_str()) {
                    return Err(Error::DuplicateStem {
                        set: label.as_str(),
                        stem: e.stem.clone(),
                    });
                }
            }
        }
        for e in &self.entries {
            check_noise_level(e.noise_level)?;
        }
        Ok(())
    }
}

fn check_noise_level(level: Option<f64>) -> Result<()> {
    match level {
        Some(v) if !NOISE_LEVELS.contains(&v) => Err(Error::InvalidValue(format!(
            "noise level {v} is not one of 0.0, 0.25, 0.5, 0.75"
        ))),
        _ => Ok(()),
    }
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in walkdir::WalkDir::new(dir).follow_links(true) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let is_image = entry
            .path()
            .extension()
            .and_then(|x| x.to_str())
            .is_some_and(|x| IMAGE_EXTENSIONS.contains(&x.to_ascii_lowercase().as_str()));
        if is_image {
            out.push(entry.into_path());
        }
    }
    Ok(out)
}

/// Scans both directories recursively for PNG/JPEG files.
///
/// Entries are sorted by path so repeated scans of the same tree produce
/// identical manifests.
pub fn build_manifest(
    real_dir: impl AsRef<Path>,
    generated_dir: impl AsRef<Path>,
    generator: &str,
    noise_level: Option<f64>,
    analysis_size: usize,
) -> Result<DatasetManifest> {
    check_noise_level(noise_level)?;
    let mut entries = Vec::new();
    for (dir, set) in [
        (real_dir.as_ref(), SetLabel::Real),
        (generated_dir.as_ref(), SetLabel::Generated),
    ] {
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            ));
        }
        let files = list_images(dir)?;
        if files.is_empty() {
            return Err(Error::EmptySet(set.as_str()));
        }
        for path in files {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            entries.push(ManifestEntry {
                path,
                set,
                generator: generator.to_string(),
                noise_level,
                stem,
            });
        }
    }
    entries.sort_by(|a, b| a.path.cmp(&b.path).then(a.set.cmp(&b.set)));
    let manifest = DatasetManifest {
        analysis_size,
        entries,
    };
    manifest.validate()?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    /// `(real, generated)` pairs ordered by stem.
    pub pairs: Vec<(ManifestEntry, ManifestEntry)>,
    pub unmatched_real: Vec<ManifestEntry>,
    pub unmatched_generated: Vec<ManifestEntry>,
}

/// Matches real and generated entries that share a filename stem.
pub fn pair_images(manifest: &DatasetManifest) -> Result<Pairing> {
    let index = |label| -> BTreeMap<&str, &ManifestEntry> {
        manifest.set(label).map(|e| (e.stem.as_str(), e)).collect()
    };
    let real = index(SetLabel::Real);
    let generated = index(SetLabel::Generated);
    if real.is_empty() {
        return Err(Error::EmptySet("real"));
    }
    if generated.is_empty() {
        return Err(Error::EmptySet("generated"));
    }

    let pairs: Vec<_> = real
        .iter()
        .filter_map(|(stem, r)| generated.get(stem).map(|g| ((*r).clone(), (*g).clone())))
        .collect();
    if pairs.is_empty() {
        return Err(Error::NoPairs);
    }
    let unmatched = |a: &BTreeMap<&str, &ManifestEntry>, b: &BTreeMap<&str, &ManifestEntry>| {
        a.iter()
            .filter(|(stem, _)| !b.contains_key(*stem))
            .map(|(_, e)| (*e).clone())
            .collect()
    };
    Ok(Pairing {
        unmatched_real: unmatched(&real, &generated),
        unmatched_generated: unmatched(&generated, &real),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_png(path: &Path, w: u32, h: u32, rgba: &[[u8; 4]]) {
        let buf: Vec<u8> = rgba.iter().flatten().copied().collect();
        image::RgbaImage::from_raw(w, h, buf)
            .unwrap()
            .save(path)
            .unwrap();
    }

    fn touch_png(path: &Path) {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).unwrap();
        }
        write_png(path, 1, 1, &[[10, 20, 30, 255]]);
    }

    #[test]
    fn decodes_single_white_pixel() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.png");
        image::RgbImage::from_raw(1, 1, vec![255, 255, 255])
            .unwrap()
            .save(&p)
            .unwrap();
        let img = decode_image(&p).unwrap();
        assert_eq!(img, RgbImage::new(1, 1, vec![[255, 255, 255]]).unwrap());
    }

    #[test]
    fn transparent_pixels_become_white() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.png");
        write_png(
            &p,
            2,
            2,
            &[[0, 0, 0, 0], [255, 0, 0, 0], [1, 2, 3, 0], [90, 80, 70, 0]],
        );
        let img = decode_image(&p).unwrap();
        assert!(img.pixels().iter().all(|&px| px == [255, 255, 255]));
    }

    #[test]
    fn half_alpha_blends_toward_white() {
        assert_eq!(composite_over_white([0, 100, 255, 255]), [0, 100, 255]);
        // 0·(128/255) + 255·(127/255) = 127
        assert_eq!(composite_over_white([0, 0, 0, 128]), [127, 127, 127]);
    }

    #[test]
    fn sixteen_bit_sources_are_truncated() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("deep.png");
        let raw: Vec<u16> = vec![0x12ff, 0xabcd, 0x00ff];
        image::ImageBuffer::<image::Rgb<u16>, _>::from_raw(1, 1, raw)
            .unwrap()
            .save(&p)
            .unwrap();
        let img = decode_image(&p).unwrap();
        assert_eq!(img.pixels(), &[[0x12, 0xab, 0x00]]);
    }

    #[test]
    fn truncated_jpeg_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.jpg");
        let img =
            image::RgbImage::from_fn(32, 32, |x, y| image::Rgb([x as u8 * 8, y as u8 * 8, 7]));
        img.save(&p).unwrap();
        let bytes = fs::read(&p).unwrap();
        fs::write(&p, &bytes[..bytes.len() / 3]).unwrap();
        assert!(matches!(decode_image(&p), Err(Error::Format(_))));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = decode_image("/nonexistent/nope.png").unwrap_err();
        assert_eq!(err.kind(), "IoError");
    }

    #[test]
    fn other_formats_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.png");
        fs::write(&p, b"GIF89a not really").unwrap();
        assert!(matches!(decode_image(&p), Err(Error::Format(_))));
    }

    #[test]
    fn luma_of_primaries() {
        let img = RgbImage::new(3, 1, vec![[255, 255, 255], [0, 0, 0], [255, 0, 0]]).unwrap();
        let g = to_gray(&img);
        assert_eq!(g.values()[0], 1.0);
        assert_eq!(g.values()[1], 0.0);
        assert!((g.values()[2] - 0.299).abs() < 1e-15);
    }

    #[test]
    fn standardize_same_size_is_identity() {
        let img =
            GrayImage::from_fn(256, 256, |r, c| ((r * 31 + c * 17) % 256) as f64 / 255.0).unwrap();
        let out = standardize(&img, 256).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn standardize_keeps_constants() {
        let img = GrayImage::filled(300, 400, 0.5).unwrap();
        let out = standardize(&img, 256).unwrap();
        assert_eq!(out.shape(), (256, 256));
        assert!(out.values().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn standardize_ramp_matches_hand_bilinear() {
        // 4x4 ramp v = (4r + c)/15. Downscale by 2: output (i, j) samples
        // source coordinate 2i + 0.5, i.e. the mean of a 2x2 block.
        let img = GrayImage::from_fn(4, 4, |r, c| (4 * r + c) as f64 / 15.0).unwrap();
        let out = standardize(&img, 2).unwrap();
        let expected = [
            (0.0 + 1.0 + 4.0 + 5.0) / 4.0 / 15.0,
            (2.0 + 3.0 + 6.0 + 7.0) / 4.0 / 15.0,
            (8.0 + 9.0 + 12.0 + 13.0) / 4.0 / 15.0,
            (10.0 + 11.0 + 14.0 + 15.0) / 4.0 / 15.0,
        ];
        for (got, want) in out.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn standardize_crops_center_of_wide_image() {
        // 2 rows x 6 cols; the centered square is columns 2..4.
        let img = GrayImage::from_fn(2, 6, |r, c| (r * 6 + c) as f64 / 11.0).unwrap();
        let out = standardize(&img, 2).unwrap();
        let want: Vec<f64> = [2.0, 3.0, 8.0, 9.0].iter().map(|v| v / 11.0).collect();
        assert_eq!(out.values(), want.as_slice());
    }

    #[test]
    fn standardize_rejects_degenerate_inputs() {
        let img = GrayImage::filled(1, 5, 0.2).unwrap();
        assert!(matches!(
            standardize(&img, 4),
            Err(Error::DegenerateImage { .. })
        ));
        let img = GrayImage::filled(4, 4, 0.2).unwrap();
        assert!(standardize(&img, 1).is_err());
    }

    #[test]
    fn manifest_is_sorted_and_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let real = dir.path().join("real");
        let fake = dir.path().join("fake");
        touch_png(&real.join("b.png"));
        touch_png(&real.join("a.png"));
        fs::write(real.join("notes.txt"), "not an image").unwrap();
        touch_png(&fake.join("sub/tmp.png"));
        fs::rename(fake.join("sub/tmp.png"), fake.join("sub/a.JPG")).unwrap();
        let m1 = build_manifest(&real, &fake, "sd3", Some(0.25), 64).unwrap();
        let m2 = build_manifest(&real, &fake, "sd3", Some(0.25), 64).unwrap();
        assert_eq!(m1.to_json().unwrap(), m2.to_json().unwrap());
        let names: Vec<_> = m1
            .set(SetLabel::Real)
            .map(|e| e.path.file_name().unwrap().to_str().unwrap())
            .collect();
        assert_eq!(names, ["a.png", "b.png"]);
        assert_eq!(m1.count(SetLabel::Generated), 1);
    }

    #[test]
    fn manifest_json_key_order() {
        let m = DatasetManifest {
            analysis_size: 8,
            entries: vec![ManifestEntry {
                path: "r/x.png".into(),
                set: SetLabel::Real,
                generator: "sd3".into(),
                noise_level: None,
                stem: "x".into(),
            }],
        };
        let compact = serde_json::to_string(&m).unwrap();
        assert_eq!(
            compact,
            r#"{"analysis_size":8,"entries":[{"path":"r/x.png","set":"real","generator":"sd3","noise_level":null,"stem":"x"}]}"#
        );
        assert_eq!(DatasetManifest::from_json(&compact).unwrap(), m);
    }

    #[test]
    fn empty_generated_dir_is_empty_set() {
        let dir = tempfile::tempdir().unwrap();
        let real = dir.path().join("real");
        let fake = dir.path().join("fake");
        touch_png(&real.join("a.png"));
        fs::create_dir_all(&fake).unwrap();
        let err = build_manifest(&real, &fake, "sd3", None, 64).unwrap_err();
        assert!(matches!(err, Error::EmptySet("generated")));
    }

    #[test]
    fn bad_noise_level_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        touch_png(&dir.path().join("a.png"));
        assert!(build_manifest(dir.path(), dir.path(), "sd3", Some(0.3), 64).is_err());
    }

    #[test]
    fn duplicate_stems_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        touch_png(&dir.path().join("r/a.png"));
        touch_png(&dir.path().join("r/x/a.png"));
        touch_png(&dir.path().join("g/a.png"));
        let err =
            build_manifest(dir.path().join("r"), dir.path().join("g"), "t", None, 8).unwrap_err();
        assert_eq!(err.kind(), "DuplicateStem");
    }

    #[test]
    fn manifest_counts_full_category() {
        let dir = tempfile::tempdir().unwrap();
        for i in 0..770 {
            touch_png(&dir.path().join(format!("real/{i:04}.png")));
            touch_png(&dir.path().join(format!("gen/{i:04}.png")));
        }
        let m = build_manifest(
            dir.path().join("real"),
            dir.path().join("gen"),
            "sd3",
            None,
            256,
        )
        .unwrap();
        assert_eq!(m.count(SetLabel::Real), 770);
        assert_eq!(m.count(SetLabel::Generated), 770);
    }

    fn entry(set: SetLabel, stem: &str, ext: &str) -> ManifestEntry {
        ManifestEntry {
            path: PathBuf::from(format!("{set}/{stem}.{ext}")),
            set,
            generator: "g".into(),
            noise_level: None,
            stem: stem.into(),
        }
    }

    fn manifest_of(real: &[&str], generated: &[&str]) -> DatasetManifest {
        let mut entries: Vec<_> = real
            .iter()
            .map(|s| entry(SetLabel::Real, s, "png"))
            .collect();
        entries.extend(
            generated
                .iter()
                .map(|s| entry(SetLabel::Generated, s, "jpg")),
        );
        DatasetManifest {
            analysis_size: 8,
            entries,
        }
    }

    #[test]
    fn pairs_match_by_stem_across_extensions() {
        let p = pair_images(&manifest_of(&["x"], &["x"])).unwrap();
        assert_eq!(p.pairs.len(), 1);
        assert_eq!(p.pairs[0].0.stem, "x");
        assert_eq!(p.pairs[0].1.path, PathBuf::from("generated/x.jpg"));
    }

    #[test]
    fn disjoint_stems_have_no_pairs() {
        assert!(matches!(
            pair_images(&manifest_of(&["a"], &["b"])),
            Err(Error::NoPairs)
        ));
    }

    #[test]
    fn partial_overlap_reports_unmatched() {
        let p = pair_images(&manifest_of(&["c", "a", "b"], &["d", "b", "c"])).unwrap();
        let stems: Vec<_> = p
            .pairs
            .iter()
            .map(|(r, g)| (r.stem.as_str(), g.stem.as_str()))
            .collect();
        assert_eq!(stems, [("b", "b"), ("c", "c")]);
        assert_eq!(
            p.unmatched_real
                .iter()
                .map(|e| e.stem.as_str())
                .collect::<Vec<_>>(),
            ["a"]
        );
        assert_eq!(
            p.unmatched_generated
                .iter()
                .map(|e| e.stem.as_str())
                .collect::<Vec<_>>(),
            ["d"]
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn luma_is_monotone(r in 0u8..255, g in 0u8..=255, b in 0u8..=255, ch in 0usize..3) {
                let base = [r, g, b];
                let mut bumped = base;
                bumped[ch] = bumped[ch].saturating_add(1);
                let img = RgbImage::new(2, 1, vec![base, bumped]).unwrap();
                let v = to_gray(&img);
                prop_assert!(v.values()[1] >= v.values()[0]);
            }

            #[test]
            fn standardize_shape_and_range(
                rows in 2usize..40, cols in 2usize..40, size in 2usize..48, seed in 0u64..1000
            ) {
                let img = GrayImage::from_fn(rows, cols, |r, c| {
                    (((r * 7919 + c * 104729) as u64 ^ seed) % 1000) as f64 / 999.0
                }).unwrap();
                let out = standardize(&img, size).unwrap();
                prop_assert_eq!(out.shape(), (size, size));
                prop_assert!(out.values().iter().all(|v| (0.0..=1.0).contains(v)));
            }

            #[test]
            fn pairing_is_bounded_and_unique(
                real in proptest::collection::btree_set("[a-e]{1,2}", 1..12),
                generated in proptest::collection::btree_set("[a-e]{1,2}", 1..12),
            ) {
                let r: Vec<&str> = real.iter().map(String::as_str).collect();
                let g: Vec<&str> = generated.iter().map(String::as_str).collect();
                let expected: Vec<&str> = real.intersection(&generated).map(String::as_str).collect();
                match pair_images(&manifest_of(&r, &g)) {
                    Ok(p) => {
                        prop_assert!(p.pairs.len() <= r.len().min(g.len()));
                        let stems: Vec<&str> = p.pairs.iter().map(|(a, _)| a.stem.as_str()).collect();
                        prop_assert_eq!(stems, expected);
                    }
                    Err(Error::NoPairs) => prop_assert!(expected.is_empty()),
                    Err(e) => prop_assert!(false, "unexpected {e}"),
                }
            }
        }
    }
}
