//! Reconstruction error measures and the orthogonality quality factor.

use ndarray::{linalg::general_mat_mul, Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::grid::in_disc;
use crate::pairs::pair_index;
use crate::radial::{RadialEvaluator, RadialMethod};

/// Default number of midpoint nodes for the quality factor.
pub const DEFAULT_GRID_POINTS: usize = 10_000;
/// Smallest accepted quadrature grid.
pub const MIN_GRID_POINTS: usize = 1_000;
/// Quadrature nodes per radial table block.
const NODES_PER_BLOCK: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Energy-normalized squared error.
    pub eps1: f64,
    /// Per-pixel relative squared error; `None` when some disc pixel of the
    /// reference is zero.
    pub eps2: Option<f64>,
    /// Squared error normalized by peak value and disc pixel count.
    pub eps: f64,
    /// `sqrt(eps)`, kept under this name because it is not a decibel PSNR.
    pub psnr_paper: f64,
}

/// In-disc value pairs of two equally shaped, odd square bands.
fn disc_values<'a>(
    f: &'a ArrayView2<'_, f64>,
    g: &'a ArrayView2<'_, f64>,
) -> Result<impl Iterator<Item = (f64, f64)> + 'a> {
    if f.dim() != g.dim() {
        return Err(ZernikeError::param(format!(
            "band shapes differ: {:?} vs {:?}",
            f.dim(),
            g.dim()
        )));
    }
    let (rows, cols) = f.dim();
    if rows != cols || rows % 2 == 0 {
        return Err(ZernikeError::param(format!(
            "expected odd square embedded bands, got {rows}x{cols}"
        )));
    }
    Ok(f.indexed_iter()
        .filter(move |((i, j), _)| in_disc(*i, *j, rows))
        .map(move |((i, j), &a)| (a, g[[i, j]])))
}

/// `sum (f - g)^2 / sum f^2` over the disc.
pub fn epsilon1(f: ArrayView2<'_, f64>, f_rec: ArrayView2<'_, f64>) -> Result<f64> {
    let (num, den) = disc_values(&f, &f_rec)?
        .fold((0.0, 0.0), |(n, d), (a, b)| (n + (a - b) * (a - b), d + a * a));
    if den == 0.0 {
        return Err(ZernikeError::UndefinedDenominator("sum of squared reference values is zero"));
    }
    Ok(num / den)
}

/// `sum (f - g)^2 / f^2` over the disc, undefined if any reference pixel is zero.
pub fn epsilon2(f: ArrayView2<'_, f64>, f_rec: ArrayView2<'_, f64>) -> Result<Option<f64>> {
    let mut sum = 0.0;
    for (a, b) in disc_values(&f, &f_rec)? {
        if a == 0.0 {
            return Ok(None);
        }
        sum += (a - b) * (a - b) / (a * a);
    }
    Ok(Some(sum))
}

/// `sum (f - g)^2 / (f_max^2 * disc pixel count)`.
pub fn epsilon(f: ArrayView2<'_, f64>, f_rec: ArrayView2<'_, f64>) -> Result<f64> {
    let (num, count, f_max) = disc_values(&f, &f_rec)?.fold(
        (0.0, 0usize, f64::NEG_INFINITY),
        |(n, c, mx), (a, b)| (n + (a - b) * (a - b), c + 1, mx.max(a)),
    );
    if f_max == 0.0 || count == 0 {
        return Err(ZernikeError::UndefinedDenominator("peak reference value is zero"));
    }
    Ok(num / (f_max * f_max * count as f64))
}

/// All three measures at once.
pub fn error_report(f: ArrayView2<'_, f64>, f_rec: ArrayView2<'_, f64>) -> Result<ErrorReport> {
    let eps = epsilon(f, f_rec)?;
    Ok(ErrorReport {
        eps1: epsilon1(f, f_rec)?,
        eps2: epsilon2(f, f_rec)?,
        eps,
        psnr_paper: eps.sqrt(),
    })
}

/// Quality factor per requested order for one radial method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub method: RadialMethod,
    pub grid_points: usize,
    pub orders: Vec<u32>,
    pub qf: Vec<f64>,
}

/// Orthogonality deviation of a radial method at order `n`, clipped to `[0, 1]`.
///
/// The mean over all `(n1, n2, m)` with `n1, n2 <= n` of
/// `|2 (n1 + 1) Q(n1, n2, m) - delta(n1, n2)|`, where `Q` is the midpoint-rule
/// value of `int_0^1 R_{n1 m} R_{n2 m} rho d rho` on `grid_points` nodes.
pub fn stability_qf(method: RadialMethod, n: u32, grid_points: usize) -> Result<f64> {
    Ok(stability_report(method, &[n], grid_points)?.qf[0])
}

/// Quality factors for several orders from a single set of Gram matrices.
pub fn stability_report(
    method: RadialMethod,
    orders: &[u32],
    grid_points: usize,
) -> Result<StabilityReport> {
    if grid_points < MIN_GRID_POINTS {
        return Err(ZernikeError::param(format!(
            "quadrature grid of {grid_points} points is below the minimum {MIN_GRID_POINTS}"
        )));
    }
    if orders.is_empty() {
        return Err(ZernikeError::param("no orders requested"));
    }
    let n_max = *orders.iter().max().expect("orders is non-empty");
    let evaluator = RadialEvaluator::new(method, n_max)?;
    let h = 1.0 / grid_points as f64;

    // one Gram matrix per repetition m, rows n = m, m + 2, ..., n_max
    let mut grams: Vec<Array2<f64>> = (0..=n_max)
        .map(|m| {
            let k = ((n_max - m) / 2 + 1) as usize;
            Array2::zeros((k, k))
        })
        .collect();

    let mut start = 0;
    while start < grid_points {
        let end = (start + NODES_PER_BLOCK).min(grid_points);
        let nodes: Vec<f64> = (start..end).map(|i| (i as f64 + 0.5) * h).collect();
        let sqrt_w: Vec<f64> = nodes.iter().map(|r| (r * h).sqrt()).collect();
        let table = evaluator.table_raw(&nodes, true);
        grams.par_iter_mut().enumerate().for_each(|(m, gram)| {
            let m = m as u32;
            let k = gram.nrows();
            let mut a = Array2::<f64>::zeros((k, nodes.len()));
            for (c, &sw) in sqrt_w.iter().enumerate() {
                let row = table.row(c);
                for i in 0..k {
                    a[[i, c]] = row[pair_index(m + 2 * i as u32, m)] * sw;
                }
            }
            general_mat_mul(1.0, &a, &a.t(), 1.0, gram);
        });
        start = end;
    }

    // deviation sums bucketed by max(n1, n2)
    let mut dev = vec![0.0f64; n_max as usize + 1];
    let mut count = vec![0u64; n_max as usize + 1];
    for (m, gram) in grams.iter().enumerate() {
        for ((i, l), &g) in gram.indexed_iter() {
            let n1 = m + 2 * i;
            let n2 = m + 2 * l;
            let delta = if i == l { 1.0 } else { 0.0 };
            let bucket = n1.max(n2);
            dev[bucket] += (2.0 * (n1 as f64 + 1.0) * g - delta).abs();
            count[bucket] += 1;
        }
    }
    let mut cum_dev = Vec::with_capacity(dev.len());
    let mut cum_count = Vec::with_capacity(dev.len());
    let (mut d, mut c) = (0.0, 0u64);
    for (x, y) in dev.iter().zip(&count) {
        d += x;
        c += y;
        cum_dev.push(d);
        cum_count.push(c);
    }
    let qf = orders
        .iter()
        .map(|&n| {
            let mean = cum_dev[n as usize] / cum_count[n as usize] as f64;
            if mean.is_finite() {
                mean.min(1.0)
            } else {
                1.0
            }
        })
        .collect();

    Ok(StabilityReport {
        method,
        grid_points,
        orders: orders.to_vec(),
        qf,
    })
}
