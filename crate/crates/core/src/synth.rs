//! Seeded, license-clean test images.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Gray scene of soft blobs, a few hard-edged shapes, a grating and fine
/// noise, rounded to integer levels in `0..=255`.
pub fn test_image(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = Array2::from_elem((rows, cols), 0.0f64);
    let (h, w) = (rows as f64, cols as f64);

    let blobs: Vec<(f64, f64, f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.random_range(0.0..h),
                rng.random_range(0.0..w),
                rng.random_range(0.08..0.3) * h.max(w),
                rng.random_range(-60.0..90.0),
            )
        })
        .collect();
    let ellipses: Vec<(f64, f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(0.2..0.8) * h,
                rng.random_range(0.2..0.8) * w,
                rng.random_range(0.05..0.2) * h,
                rng.random_range(0.05..0.2) * w,
                rng.random_range(-50.0..50.0),
            )
        })
        .collect();
    let rect = (
        rng.random_range(0.1..0.5) * h,
        rng.random_range(0.1..0.5) * w,
        rng.random_range(0.15..0.35) * h,
        rng.random_range(0.15..0.35) * w,
        rng.random_range(-40.0..40.0),
    );
    let grating = (rng.random_range(0.0..std::f64::consts::PI), rng.random_range(6.0..14.0));

    for ((i, j), v) in img.indexed_iter_mut() {
        let (y, x) = (i as f64, j as f64);
        let mut s = 110.0 + 40.0 * (x / w) - 20.0 * (y / h);
        for &(cy, cx, r, a) in &blobs {
            let d2 = ((y - cy).powi(2) + (x - cx).powi(2)) / (r * r);
            s += a * (-d2).exp();
        }
        for &(cy, cx, ry, rx, a) in &ellipses {
            if ((y - cy) / ry).powi(2) + ((x - cx) / rx).powi(2) <= 1.0 {
                s += a;
            }
        }
        if y >= rect.0 && y < rect.0 + rect.2 && x >= rect.1 && x < rect.1 + rect.3 {
            s += rect.4;
        }
        let (angle, period) = grating;
        let u = (x * angle.cos() + y * angle.sin()) / period * std::f64::consts::TAU;
        if x > 0.6 * w && y > 0.6 * h {
            s += 15.0 * u.sin();
        }
        s += rng.random_range(-4.0..4.0);
        *v = s.round().clamp(0.0, 255.0);
    }
    img
}

/// Three related bands built from shifted seeds.
pub fn test_image_rgb(rows: usize, cols: usize, seed: u64) -> [Array2<f64>; 3] {
    let base = test_image(rows, cols, seed);
    let mut r = base.clone();
    let g = test_image(rows, cols, seed.wrapping_add(1)).mapv(|v| (0.5 * v + 0.5 * 128.0).round());
    let b = base.mapv(|v| 255.0 - v);
    r.mapv_inplace(|v| (v * 0.9 + 20.0).round().min(255.0));
    [r, g, b]
}

/// Small random gray images for deduplication runs.
///
/// Returns `count` images of size `side x side`; for each planted pair
/// `(a, b)` image `b` is an exact copy of image `a`.
pub fn dedup_corpus(
    count: usize,
    side: usize,
    duplicate_pairs: usize,
    seed: u64,
) -> (Vec<Array2<f64>>, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: Vec<Array2<f64>> = (0..count)
        .map(|_| Array2::from_shape_fn((side, side), |_| f64::from(rng.random::<u8>())))
        .collect();
    let pairs_wanted = duplicate_pairs.min(count / 2);
    let mut idx: Vec<usize> = (0..count).collect();
    // partial Fisher-Yates for 2 * pairs_wanted distinct positions
    for k in 0..2 * pairs_wanted {
        let pick = rng.random_range(k..count);
        idx.swap(k, pick);
    }
    let mut planted: Vec<(usize, usize)> = idx[..2 * pairs_wanted]
        .chunks_exact(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    planted.sort_unstable();
    for &(a, b) in &planted {
        images[b] = images[a].clone();
    }
    (images, planted)
}
