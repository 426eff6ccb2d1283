#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specprint::GrayImage;

/// Peak-to-peak amplitude of the fine-grain texture added to synthetic images.
const NOISE: f64 = 0.05;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Three low-frequency sinusoids around 0.5 plus uniform fine-grain texture,
/// within [0.175, 0.825].
pub fn smooth_image(size: usize, seed: u64) -> GrayImage {
    let mut r = rng(seed);
    let waves: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                r.gen_range(1..=2) as f64,
                r.gen_range(0..=2) as f64,
                r.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let n = size as f64;
    GrayImage::from_fn(size, size, |m, k| {
        let s: f64 = waves
            .iter()
            .map(|(f, g, ph)| (2.0 * PI * (f * m as f64 + g * k as f64) / n + ph).sin())
            .sum();
        0.5 + 0.1 * s + NOISE * (r.gen::<f64>() - 0.5)
    })
    .unwrap()
}

/// Adds a ±`amp` checkerboard.
pub fn with_checkerboard(img: &GrayImage, amp: f64) -> GrayImage {
    use specprint::Plane;
    GrayImage::from_fn(img.rows(), img.cols(), |r, c| {
        let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
        (img.at(r, c) + sign * amp).clamp(0.0, 1.0)
    })
    .unwrap()
}

pub fn save_png(img: &GrayImage, path: &Path) {
    use specprint::Plane;
    let bytes: Vec<u8> = img
        .values()
        .iter()
        .map(|v| (v * 255.0).round() as u8)
        .collect();
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).unwrap();
    }
    image::GrayImage::from_raw(img.cols() as u32, img.rows() as u32, bytes)
        .unwrap()
        .save(path)
        .unwrap();
}

/// Writes `count` smooth images to `real/` and their checkerboard-corrupted
/// counterparts (same stems) to `fake/`.
pub fn write_synthetic_sets(root: &Path, count: usize, size: usize) {
    for i in 0..count {
        let img = smooth_image(size, 1000 + i as u64);
        save_png(&img, &root.join(format!("real/img{i:03}.png")));
        save_png(
            &with_checkerboard(&img, 0.1),
            &root.join(format!("fake/img{i:03}.png")),
        );
    }
}
