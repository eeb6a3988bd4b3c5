//! Discrete Zernike moments of embedded bands.
//!
//! For every valid `(n, m >= 0)`:
//!
//! ```text
//! Z_nm = (n + 1) / pi * delta^2 * sum_{disc pixels} R_nm(rho) f(i, j) exp(-j m theta)
//! ```
//!
//! optionally divided by the Neumann factor. Negative repetitions are never
//! stored; `Z_{n,-m} = conj(Z_nm)`.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::ArrayView2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::grid::{DiscGeometry, GridMeta, ImageGrid};
use crate::pairs::{order_offset, pair_count, pair_index, repetitions};
use crate::radial::{RadialEvaluator, RadialMethod, Scratch};

/// Radii per work unit. Fixed so that results do not depend on thread count.
pub(crate) const RADII_PER_CHUNK: usize = 64;
/// Work units reduced per parallel batch.
const CHUNKS_PER_BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentOptions {
    pub method: RadialMethod,
    /// Divide each coefficient by the Neumann factor of its repetition.
    pub neumann: bool,
    /// Accumulate over 8-fold pixel orbits instead of pixel by pixel.
    pub symmetry: bool,
}

impl Default for MomentOptions {
    fn default() -> Self {
        Self {
            method: RadialMethod::Fft,
            neumann: false,
            symmetry: false,
        }
    }
}

/// `2` for `m = 0`, `1` otherwise.
pub fn neumann_factor(m: i32) -> f64 {
    if m == 0 {
        2.0
    } else {
        1.0
    }
}

/// `(n + 1) / pi * delta^2`.
fn normalization(n: u32, size: usize) -> f64 {
    let delta = 2.0 / size as f64;
    (f64::from(n) + 1.0) / PI * delta * delta
}

/// Complex Zernike coefficients of one band up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    n_max: u32,
    method: RadialMethod,
    neumann: bool,
    grid: GridMeta,
    band_stats: (f64, f64),
    coefficients: Vec<Complex64>,
}

impl MomentSet {
    /// Assembles a set from its parts; `coefficients` must be in pair layout.
    pub fn from_parts(
        n_max: u32,
        method: RadialMethod,
        neumann: bool,
        grid: GridMeta,
        band_stats: (f64, f64),
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        grid.validate()?;
        if coefficients.len() != pair_count(n_max) {
            return Err(ZernikeError::param(format!(
                "{} coefficients given, order {n_max} needs {}",
                coefficients.len(),
                pair_count(n_max)
            )));
        }
        if coefficients.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ZernikeError::param("non-finite moment coefficient"));
        }
        if !(band_stats.0.is_finite() && band_stats.1.is_finite()) || band_stats.0 > band_stats.1 {
            return Err(ZernikeError::param(format!("invalid band range {band_stats:?}")));
        }
        Ok(Self {
            n_max,
            method,
            neumann,
            grid,
            band_stats,
            coefficients,
        })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn method(&self) -> RadialMethod {
        self.method
    }

    pub fn neumann(&self) -> bool {
        self.neumann
    }

    pub fn grid(&self) -> GridMeta {
        self.grid
    }

    /// `(min, max)` of the source band.
    pub fn band_stats(&self) -> (f64, f64) {
        self.band_stats
    }

    /// `Z_nm` for any valid signed repetition.
    pub fn get(&self, n: u32, m: i32) -> Option<Complex64> {
        let am = m.unsigned_abs();
        if n > self.n_max || am > n || (n - am) % 2 != 0 {
            return None;
        }
        let z = self.coefficients[pair_index(n, am)];
        Some(if m < 0 { z.conj() } else { z })
    }

    /// Coefficients of order `n`, ascending `m >= 0`.
    pub fn order(&self, n: u32) -> &[Complex64] {
        assert!(n <= self.n_max, "order {n} beyond n_max {}", self.n_max);
        &self.coefficients[order_offset(n)..order_offset(n + 1)]
    }

    /// Coefficients in pair layout.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `(n, m, Z_nm)` for `m >= 0`, ascending by `n` then `m`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        crate::pairs::pairs(self.n_max)
            .zip(self.coefficients.iter())
            .map(|((n, m), &z)| (n, m, z))
    }

    /// The same set restricted to orders `<= n`.
    pub fn truncated(&self, n: u32) -> Result<Self> {
        if n > self.n_max {
            return Err(ZernikeError::param(format!(
                "cannot truncate order {} to {n}",
                self.n_max
            )));
        }
        Ok(Self {
            n_max: n,
            coefficients: self.coefficients[..pair_count(n)].to_vec(),
            ..self.clone()
        })
    }
}

/// Range of radius indices handled by work unit `chunk`.
pub(crate) fn chunk_radii(chunk: usize, total: usize) -> std::ops::Range<usize> {
    let start = chunk * RADII_PER_CHUNK;
    start..(start + RADII_PER_CHUNK).min(total)
}

/// Unit phase `exp(-j theta)` powers `m = 0..=n_max`, scaled by `scale`.
pub(crate) fn phase_ladder(theta: f64, scale: f64, n_max: u32, out: &mut Vec<Complex64>) {
    out.clear();
    let step = Complex64::new(theta.cos(), -theta.sin());
    let mut z = Complex64::new(scale, 0.0);
    for _ in 0..=n_max {
        out.push(z);
        z *= step;
    }
}

/// `(-j)^r` for `r` in `0..4`, applied to a complex number.
#[inline]
fn rot_neg_j(z: Complex64, r: usize) -> Complex64 {
    match r & 3 {
        0 => z,
        1 => Complex64::new(z.im, -z.re),
        2 => -z,
        _ => Complex64::new(-z.im, z.re),
    }
}

fn accumulate_orders(partial: &mut [Complex64], row: &[f64], angular: &[Complex64], n_max: u32) {
    for n in 0..=n_max {
        let off = order_offset(n);
        let len = n as usize / 2 + 1;
        let first = (n % 2) as usize;
        for (j, (p, &r)) in partial[off..off + len]
            .iter_mut()
            .zip(&row[off..off + len])
            .enumerate()
        {
            *p += angular[first + 2 * j] * r;
        }
    }
}

/// Unnormalized sums for the radii of one work unit.
fn chunk_sums(
    geometry: &DiscGeometry,
    values: &[f64],
    evaluator: &RadialEvaluator,
    chunk: usize,
    symmetry: bool,
) -> Result<Option<Vec<Complex64>>> {
    let n_max = evaluator.n_max();
    let range = chunk_radii(chunk, geometry.radii().len());
    let pixels = geometry.pixels();
    let size = geometry.size();

    // radii carrying at least one non-zero pixel
    let active: Vec<usize> = range
        .filter(|&r| {
            geometry.pixels_at(r).iter().any(|&p| {
                let px = pixels[p as usize];
                values[px.row as usize * size + px.col as usize] != 0.0
            })
        })
        .collect();
    if active.is_empty() {
        return Ok(None);
    }
    let radii: Vec<f64> = active.iter().map(|&r| geometry.radii()[r]).collect();
    let table = evaluator.table(&radii, false)?;

    let mut partial = vec![Complex64::default(); pair_count(n_max)];
    let mut angular = Vec::with_capacity(n_max as usize + 1);
    for (row_idx, &r) in active.iter().enumerate() {
        let row = table.row(row_idx);
        if symmetry {
            for orbit in geometry.orbits_at(r) {
                // d[s][k]: sum of pixel values at angle s*theta0 + k*pi/2
                let mut d = [[0.0f64; 4]; 2];
                let mut any = false;
                for mm in &orbit.members {
                    let v = values[mm.flat as usize];
                    any |= v != 0.0;
                    d[mm.negate as usize][mm.quarter as usize] += v;
                }
                if !any {
                    continue;
                }
                // D_s(m mod 4) = sum_k d[s][k] (-j)^(m k)
                let mut dm = [[Complex64::default(); 4]; 2];
                for s in 0..2 {
                    for (q, slot) in dm[s].iter_mut().enumerate() {
                        *slot = (0..4)
                            .map(|k| rot_neg_j(Complex64::new(d[s][k], 0.0), q * k))
                            .sum();
                    }
                }
                phase_ladder(orbit.theta, 1.0, n_max, &mut angular);
                for (m, z) in angular.iter_mut().enumerate() {
                    let c = *z;
                    *z = c * dm[0][m & 3] + c.conj() * dm[1][m & 3];
                }
                accumulate_orders(&mut partial, row, &angular, n_max);
            }
        } else {
            for &p in geometry.pixels_at(r) {
                let px = pixels[p as usize];
                let v = values[px.row as usize * size + px.col as usize];
                if v == 0.0 {
                    continue;
                }
                phase_ladder(px.theta, v, n_max, &mut angular);
                accumulate_orders(&mut partial, row, &angular, n_max);
            }
        }
    }
    Ok(Some(partial))
}

/// Runs `work` over every radius chunk and folds the partial sums in chunk order.
pub(crate) fn fold_chunks<F>(chunks: usize, len: usize, work: F) -> Result<Vec<Complex64>>
where
    F: Fn(usize) -> Result<Option<Vec<Complex64>>> + Sync,
{
    let mut total = vec![Complex64::default(); len];
    let mut first = 0;
    while first < chunks {
        let last = (first + CHUNKS_PER_BATCH).min(chunks);
        let partials = (first..last)
            .into_par_iter()
            .map(&work)
            .collect::<Result<Vec<_>>>()?;
        for partial in partials.into_iter().flatten() {
            for (t, p) in total.iter_mut().zip(partial) {
                *t += p;
            }
        }
        first = last;
    }
    Ok(total)
}

fn band_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Zernike moments of an embedded band for every valid pair up to `n_max`.
pub fn compute_moments(grid: &ImageGrid, n_max: u32, opts: MomentOptions) -> Result<MomentSet> {
    let evaluator = RadialEvaluator::new(opts.method, n_max)?;
    let geometry = grid.geometry();
    let values = grid.flat();
    let chunks = geometry.radii().len().div_ceil(RADII_PER_CHUNK);

    let mut coefficients = fold_chunks(chunks, pair_count(n_max), |chunk| {
        chunk_sums(geometry, values, &evaluator, chunk, opts.symmetry)
    })?;

    for n in 0..=n_max {
        let lambda = normalization(n, grid.size());
        let off = order_offset(n);
        for (j, m) in repetitions(n).enumerate() {
            let scale = if opts.neumann {
                lambda / neumann_factor(m as i32)
            } else {
                lambda
            };
            coefficients[off + j] *= scale;
        }
    }
    if let Some(bad) = coefficients.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        let order = (0..=n_max).rev().find(|&n| order_offset(n) <= bad).unwrap_or(0);
        return Err(ZernikeError::NonFinite {
            method: opts.method.as_str(),
            order,
        });
    }

    let meta = grid.meta();
    let original = grid.band().slice(ndarray::s![
        meta.offset_row..meta.offset_row + meta.original_height,
        meta.offset_col..meta.offset_col + meta.original_width
    ]);
    let band_stats = band_range(original.iter().copied());

    Ok(MomentSet {
        n_max,
        method: opts.method,
        neumann: opts.neumann,
        grid: meta,
        band_stats,
        coefficients,
    })
}

/// A single coefficient `Z_nm` for a signed repetition, summed pixel by pixel.
///
/// Negative `m` evaluates `exp(+j|m| theta)` directly rather than by conjugation.
pub fn compute_moment(grid: &ImageGrid, n: u32, m: i32, opts: MomentOptions) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > n || (n - am) % 2 != 0 {
        return Err(ZernikeError::param(format!("invalid pair (n={n}, m={m})")));
    }
    let evaluator = RadialEvaluator::new(opts.method, n)?;
    let geometry = grid.geometry();
    let values = grid.flat();
    let size = grid.size();
    let radii = geometry.radii();
    let mut scratch = Scratch::default();
    let mut order_vals = vec![0.0; n as usize / 2 + 1];
    let slot = (am / 2) as usize;

    let mut sum = Complex64::default();
    for (r, &rho) in radii.iter().enumerate() {
        let pix = geometry.pixels_at(r);
        let mut radial = None;
        for &p in pix {
            let px = geometry.pixels()[p as usize];
            let v = values[px.row as usize * size + px.col as usize];
            if v == 0.0 {
                continue;
            }
            let rv = *radial.get_or_insert_with(|| {
                evaluator.fill_order(n, rho, &mut order_vals, &mut scratch);
                order_vals[slot]
            });
            let phase = -f64::from(m) * px.theta;
            sum += Complex64::new(phase.cos(), phase.sin()) * (rv * v);
        }
    }
    let mut scale = normalization(n, size);
    if opts.neumann {
        scale /= neumann_factor(m);
    }
    Ok(sum * scale)
}

/// Moments of three equally sized bands, one [`MomentSet`] per band.
pub fn compute_moments_color(
    bands: &[ArrayView2<'_, f64>],
    n_max: u32,
    opts: MomentOptions,
) -> Result<Vec<MomentSet>> {
    if bands.len() != 3 {
        return Err(ZernikeError::param(format!("expected 3 bands, got {}", bands.len())));
    }
    let dim = bands[0].dim();
    if bands.iter().any(|b| b.dim() != dim) {
        return Err(ZernikeError::param("colour bands differ in shape"));
    }
    let meta = GridMeta::for_image(dim.0, dim.1)?;
    let geometry = Arc::new(DiscGeometry::new(meta.size)?);
    bands
        .iter()
        .map(|b| {
            let grid = ImageGrid::with_geometry(b.view(), Arc::clone(&geometry))?;
            compute_moments(&grid, n_max, opts)
        })
        .collect()
}
