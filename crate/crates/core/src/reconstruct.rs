//! Image reconstruction from truncated moment sets.
//!
//! `f(x, y) = Re[ sum_{n <= cap} sum_m Z_nm R_nm(rho) exp(j m theta) ]`, with the
//! negative repetitions folded in by conjugate pairing: `m = 0` contributes
//! once and every `m > 0` contributes `2 Re[Z_nm R_nm exp(j m theta)]`.

use ndarray::{s, Array2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, ZernikeError};
use crate::grid::{in_disc, DiscGeometry, GridMeta};
use crate::moments::{chunk_radii, phase_ladder, MomentSet, RADII_PER_CHUNK};
use crate::pairs::{order_offset, repetitions};
use crate::radial::RadialEvaluator;

/// Reconstructed band(s) at the embedded size.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedImage {
    bands: Vec<Array2<f64>>,
    normalized: bool,
    grid: GridMeta,
    order_cap: u32,
}

impl ReconstructedImage {
    pub fn bands(&self) -> &[Array2<f64>] {
        &self.bands
    }

    pub fn into_bands(self) -> Vec<Array2<f64>> {
        self.bands
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn grid(&self) -> GridMeta {
        self.grid
    }

    pub fn order_cap(&self) -> u32 {
        self.order_cap
    }

    /// Bands cut back to the original image window.
    pub fn cropped(&self) -> Vec<Array2<f64>> {
        self.bands.iter().map(|b| crop(b, &self.grid)).collect()
    }
}

/// The original-image window of an embedded band.
pub fn crop(band: &Array2<f64>, meta: &GridMeta) -> Array2<f64> {
    band.slice(s![
        meta.offset_row..meta.offset_row + meta.original_height,
        meta.offset_col..meta.offset_col + meta.original_width
    ])
    .to_owned()
}

/// `Re(z j^r)`.
#[inline]
fn re_rot_j(z: Complex64, r: usize) -> f64 {
    match r & 3 {
        0 => z.re,
        1 => -z.im,
        2 => -z.re,
        _ => z.im,
    }
}

/// Raw reconstructions for several order caps from one pass over the orders.
///
/// The result holds one `M x M` band per entry of `caps`, in the given order.
pub fn reconstruct_orders(moments: &MomentSet, caps: &[u32]) -> Result<Vec<Array2<f64>>> {
    if caps.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&bad) = caps.iter().find(|&&c| c > moments.n_max()) {
        return Err(ZernikeError::param(format!(
            "order cap {bad} exceeds the computed order {}",
            moments.n_max()
        )));
    }
    let mut sorted: Vec<u32> = caps.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let max_cap = *sorted.last().expect("caps is non-empty");

    let meta = moments.grid();
    let geometry = DiscGeometry::new(meta.size)?;
    let evaluator = RadialEvaluator::new(moments.method(), max_cap)?;
    let coeffs = moments.coefficients();
    let chunks = geometry.radii().len().div_ceil(RADII_PER_CHUNK);

    // per chunk: (flat pixel index, value per sorted cap)
    let pieces = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Vec<(u32, Vec<f64>)>> {
            let range = chunk_radii(chunk, geometry.radii().len());
            let table = evaluator.table(&geometry.radii()[range.clone()], false)?;
            let mut out = Vec::new();
            let mut b = vec![Complex64::default(); max_cap as usize + 1];
            let mut ladder = Vec::with_capacity(max_cap as usize + 1);
            for (row_idx, r) in range.enumerate() {
                let row = table.row(row_idx);
                for orbit in geometry.orbits_at(r) {
                    b.iter_mut().for_each(|z| *z = Complex64::default());
                    // exp(+j m theta0)
                    phase_ladder(-orbit.theta, 1.0, max_cap, &mut ladder);
                    let mut values = vec![Vec::with_capacity(sorted.len()); orbit.members.len()];
                    let mut next = 0;
                    for n in 0..=max_cap {
                        let off = order_offset(n);
                        for (j, m) in repetitions(n).enumerate() {
                            b[m as usize] += coeffs[off + j] * row[off + j];
                        }
                        if n != sorted[next] {
                            continue;
                        }
                        // acc[s][k]: pixel at angle s*theta0 + k*pi/2
                        let mut acc = [[0.0f64; 4]; 2];
                        for m in 0..=n as usize {
                            let w = if m == 0 { 1.0 } else { 2.0 };
                            let pos = b[m] * ladder[m];
                            let neg = b[m] * ladder[m].conj();
                            for k in 0..4 {
                                acc[0][k] += w * re_rot_j(pos, m * k);
                                acc[1][k] += w * re_rot_j(neg, m * k);
                            }
                        }
                        for (v, mm) in values.iter_mut().zip(&orbit.members) {
                            v.push(acc[mm.negate as usize][mm.quarter as usize]);
                        }
                        next += 1;
                        if next == sorted.len() {
                            break;
                        }
                    }
                    out.extend(orbit.members.iter().map(|mm| mm.flat).zip(values));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut bands = vec![Array2::<f64>::zeros((meta.size, meta.size)); sorted.len()];
    {
        let mut flats: Vec<&mut [f64]> = bands
            .iter_mut()
            .map(|b| b.as_slice_mut().expect("fresh arrays are contiguous"))
            .collect();
        for (flat, vals) in pieces.into_iter().flatten() {
            for (band, v) in flats.iter_mut().zip(vals) {
                band[flat as usize] = v;
            }
        }
    }
    Ok(caps
        .iter()
        .map(|c| bands[sorted.binary_search(c).expect("cap was collected")].clone())
        .collect())
}

/// Raw (unnormalized) reconstruction of one band up to `order_cap`.
pub fn reconstruct(moments: &MomentSet, order_cap: u32) -> Result<ReconstructedImage> {
    let band = reconstruct_orders(moments, &[order_cap])?
        .pop()
        .expect("one cap requested");
    Ok(ReconstructedImage {
        bands: vec![band],
        normalized: false,
        grid: moments.grid(),
        order_cap,
    })
}

fn check_square_odd(band: &Array2<f64>) -> Result<usize> {
    let (rows, cols) = band.dim();
    if rows != cols || rows % 2 == 0 {
        return Err(ZernikeError::param(format!(
            "expected an odd square embedded band, got {rows}x{cols}"
        )));
    }
    Ok(rows)
}

/// Affine map of the in-disc values onto `[target_min, target_max]`.
///
/// Out-of-disc pixels are left untouched. A constant in-disc band maps to
/// `target_min` everywhere inside the disc.
pub fn minmax_normalize(band: &Array2<f64>, target_min: f64, target_max: f64) -> Result<Array2<f64>> {
    if !(target_min <= target_max) {
        return Err(ZernikeError::param(format!(
            "target range [{target_min}, {target_max}] is empty"
        )));
    }
    let size = check_square_odd(band)?;
    let (lo, hi) = band
        .indexed_iter()
        .filter(|((i, j), _)| in_disc(*i, *j, size))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &v)| {
            (lo.min(v), hi.max(v))
        });
    let mut out = band.clone();
    if lo == target_min && hi == target_max {
        // already on target; recomputing the map could move the last bit
        return Ok(out);
    }
    let span = hi - lo;
    for ((i, j), v) in out.indexed_iter_mut() {
        if !in_disc(i, j, size) {
            continue;
        }
        *v = if span > 0.0 {
            let t = (*v - lo) / span;
            target_min * (1.0 - t) + target_max * t
        } else {
            target_min
        };
    }
    Ok(out)
}

/// Per-band reconstruction normalized to each band's stored range.
pub fn reconstruct_color(moment_sets: &[MomentSet], order_cap: u32) -> Result<ReconstructedImage> {
    if moment_sets.is_empty() {
        return Err(ZernikeError::param("no moment sets given"));
    }
    let grid = moment_sets[0].grid();
    if moment_sets.iter().any(|m| m.grid() != grid) {
        return Err(ZernikeError::param("moment sets disagree on grid metadata"));
    }
    let bands = moment_sets
        .iter()
        .map(|set| {
            let raw = reconstruct(set, order_cap)?.into_bands().pop().expect("one band");
            let (lo, hi) = set.band_stats();
            minmax_normalize(&raw, lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReconstructedImage {
        bands,
        normalized: true,
        grid,
        order_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::embed_image;
    use crate::moments::{compute_moments, MomentOptions};
    use crate::pairs::pair_count;
    use crate::radial::RadialMethod;

    fn pattern(n: usize) -> Array2<f64> {
        Array2::from_shape_fn((n, n), |(i, j)| 50.0 + ((i * 7 + j * 3) % 11) as f64 * 10.0)
    }

    #[test]
    fn zero_moments_give_zero_image() {
        let grid = embed_image(Array2::zeros((9, 9)).view()).unwrap();
        let set = compute_moments(&grid, 8, MomentOptions::default()).unwrap();
        let rec = reconstruct(&set, 8).unwrap();
        assert!(rec.bands()[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_constant_coefficient() {
        let meta = GridMeta::for_image(5, 5).unwrap();
        let mut coeffs = vec![Complex64::default(); pair_count(4)];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let set = MomentSet::from_parts(4, RadialMethod::Fft, false, meta, (0.0, 1.0), coeffs).unwrap();
        let rec = reconstruct(&set, 4).unwrap();
        for ((i, j), &v) in rec.bands()[0].indexed_iter() {
            if in_disc(i, j, meta.size) {
                assert!((v - 1.0).abs() < 1e-12);
            } else {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn multi_cap_matches_single_cap() {
        let grid = embed_image(pattern(12).view()).unwrap();
        let set = compute_moments(&grid, 12, MomentOptions::default()).unwrap();
        let many = reconstruct_orders(&set, &[12, 3, 7]).unwrap();
        for (cap, band) in [12, 3, 7].into_iter().zip(&many) {
            // the radial tables differ in transform length, so allow rounding
            let one = reconstruct(&set, cap).unwrap();
            for (a, b) in one.bands()[0].iter().zip(band) {
                assert!((a - b).abs() < 1e-10, "cap {cap}: {a} vs {b}");
            }
        }
        assert!(reconstruct(&set, 13).is_err());
    }

    #[test]
    fn reconstruction_matches_pixelwise_sum() {
        let grid = embed_image(pattern(6).view()).unwrap();
        let set = compute_moments(&grid, 6, MomentOptions::default()).unwrap();
        let rec = reconstruct(&set, 6).unwrap();
        let size = grid.size();
        for px in grid.disc_pixels().iter().step_by(7) {
            let mut v = 0.0;
            for (n, m, z) in set.iter() {
                let r = crate::radial::zrp_direct(n, m as i32, px.rho).unwrap();
                let phase = Complex64::from_polar(1.0, f64::from(m) * px.theta);
                let w = if m == 0 { 1.0 } else { 2.0 };
                v += w * (z * r * phase).re;
            }
            let got = rec.bands()[0][[px.row as usize, px.col as usize]];
            assert!((got - v).abs() < 1e-9, "{got} vs {v}");
        }
        assert_eq!(rec.bands()[0].dim(), (size, size));
    }

    #[test]
    fn normalize_examples() {
        let size = 7;
        let mut band = Array2::zeros((size, size));
        for ((i, j), v) in band.indexed_iter_mut() {
            if in_disc(i, j, size) {
                *v = (i + j) as f64 / 12.0;
            }
        }
        let lo = band.indexed_iter().filter(|((i, j), _)| in_disc(*i, *j, size)).map(|(_, &v)| v).fold(f64::INFINITY, f64::min);
        let hi = band.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(minmax_normalize(&band, lo, hi).unwrap(), band);
        let once = minmax_normalize(&band, 10.0, 20.0).unwrap();
        assert_eq!(minmax_normalize(&once, 10.0, 20.0).unwrap(), once);

        let out = minmax_normalize(&band, 10.0, 20.0).unwrap();
        let c = (size - 1) / 2;
        // centre value 0.5 on a [0, 1] in-disc range
        assert!((out[[c, c]] - 15.0).abs() < 1e-12);
        assert_eq!(out[[0, 0]], 0.0);

        let flat = Array2::from_elem((size, size), 3.0);
        let out = minmax_normalize(&flat, 1.0, 9.0).unwrap();
        assert_eq!(out[[c, c]], 1.0);
        assert_eq!(out[[0, 0]], 3.0);

        assert!(minmax_normalize(&band, 2.0, 1.0).is_err());
        assert!(minmax_normalize(&Array2::zeros((4, 4)), 0.0, 1.0).is_err());
    }

    #[test]
    fn color_reconstruction() {
        let g = pattern(10);
        let sets = crate::moments::compute_moments_color(&[g.view(), g.view(), Array2::zeros((10, 10)).view()], 10, MomentOptions::default()).unwrap();
        let rec = reconstruct_color(&sets, 10).unwrap();
        assert!(rec.normalized());
        assert_eq!(rec.bands()[0], rec.bands()[1]);
        let size = rec.grid().size;
        for ((i, j), &v) in rec.bands()[2].indexed_iter() {
            if in_disc(i, j, size) {
                assert_eq!(v, 0.0);
            }
        }
        let (lo, hi) = sets[0].band_stats();
        for ((i, j), &v) in rec.bands()[0].indexed_iter() {
            if in_disc(i, j, size) {
                assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
            }
        }
        assert_eq!(rec.cropped()[0].dim(), (10, 10));

        let other = compute_moments(&embed_image(pattern(11).view()).unwrap(), 10, MomentOptions::default()).unwrap();
        assert!(reconstruct_color(&[sets[0].clone(), other, sets[2].clone()], 10).is_err());
    }
}
