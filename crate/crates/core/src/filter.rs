//! Border-reflecting neighbourhood filters shared by the denoisers and SSIM.
//!
//! Borders use half-sample symmetric reflection (`d c b a | a b c d`),
//! extended periodically with period `2·len` so kernels wider than the
//! signal stay well defined. With a symmetric normalized kernel this
//! preserves the signal sum exactly.

/// Maps a possibly out-of-range index onto `0..len` by mirroring.
pub(crate) fn mirror(index: isize, len: usize) -> usize {
    let period = 2 * len as isize;
    let i = index.rem_euclid(period);
    if i < len as isize {
        i as usize
    } else {
        (period - 1 - i) as usize
    }
}

/// Normalized 1-D Gaussian taps for offsets `-radius..=radius`.
pub(crate) fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let raw: Vec<f64> = (-r..=r)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

/// Separable convolution with the same symmetric kernel along both axes.
pub(crate) fn convolve_separable(
    values: &[f64],
    rows: usize,
    cols: usize,
    kernel: &[f64],
) -> Vec<f64> {
    let radius = (kernel.len() / 2) as isize;
    let mut tmp = vec![0.0; rows * cols];
    for r in 0..rows {
        let row = &values[r * cols..(r + 1) * cols];
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                acc += w * row[mirror(c as isize + k as isize - radius, cols)];
            }
            tmp[r * cols + c] = acc;
        }
    }
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                acc += w * tmp[mirror(r as isize + k as isize - radius, rows) * cols + c];
            }
            out[r * cols + c] = acc;
        }
    }
    out
}

/// Square-window median of side `2·radius + 1`.
pub(crate) fn median(values: &[f64], rows: usize, cols: usize, radius: usize) -> Vec<f64> {
    let r = radius as isize;
    let side = 2 * radius + 1;
    let mut window = Vec::with_capacity(side * side);
    let mut out = vec![0.0; rows * cols];
    for y in 0..rows {
        for x in 0..cols {
            window.clear();
            for dy in -r..=r {
                let yy = mirror(y as isize + dy, rows);
                for dx in -r..=r {
                    window.push(values[yy * cols + mirror(x as isize + dx, cols)]);
                }
            }
            let mid = window.len() / 2;
            let (_, m, _) = window.select_nth_unstable_by(mid, f64::total_cmp);
            out[y * cols + x] = *m;
        }
    }
    out
}
