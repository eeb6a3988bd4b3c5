use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;
use zernike_core::dedup::{find_duplicates, zm_signature, SignatureConfig};
use zernike_core::io::{load_image, read_moment_file, save_image, to_u8, write_moment_file};
use zernike_core::metrics::{error_report, stability_report};
use zernike_core::synth;
use zernike_core::{
    compute_moment, compute_moments, minmax_normalize, reconstruct, reconstruct_orders, DiscGeometry,
    GridMeta, ImageGrid, MomentOptions, MomentSet, RadialMethod, Result, ZernikeError,
};

use crate::args::{BenchArgs, ComputeArgs, DedupArgs, ReconstructArgs, RoundtripArgs, StabilityArgs, SynthArgs};
use crate::report::{csv_text, emit};

// ---------------------------------------------------------------------------
// compute / reconstruct

fn band_grids(bands: &[Array2<f64>]) -> Result<Vec<ImageGrid>> {
    let (rows, cols) = bands[0].dim();
    let meta = GridMeta::for_image(rows, cols)?;
    let geometry = Arc::new(DiscGeometry::new(meta.size)?);
    bands
        .iter()
        .map(|b| ImageGrid::with_geometry(b.view(), Arc::clone(&geometry)))
        .collect()
}

/// Moment sets of every band of an image file.
pub fn moments_of_file(path: &Path, n_max: u32, opts: MomentOptions) -> Result<Vec<MomentSet>> {
    let image = load_image(path)?;
    band_grids(&image.bands)?
        .iter()
        .map(|g| compute_moments(g, n_max, opts))
        .collect()
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<Vec<MomentSet>> {
    let opts = MomentOptions {
        method: args.method,
        neumann: args.neumann,
        symmetry: args.symmetry,
    };
    let sets = moments_of_file(&args.input, args.order, opts)?;
    write_moment_file(&args.output, &sets)?;
    Ok(sets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructSummary {
    pub bands: usize,
    pub order_cap: u32,
    pub normalized: bool,
    /// Output pixels per band, cropped to the original window.
    pub pixels: Vec<Array2<u8>>,
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<ReconstructSummary> {
    let sets = read_moment_file(&args.input)?;
    let cap = args.order.unwrap_or(sets[0].n_max());
    let normalized = args.normalize.resolve(true);
    let pixels = sets
        .iter()
        .map(|set| {
            let rec = reconstruct(set, cap)?;
            let raw = &rec.bands()[0];
            let band = if normalized {
                let (lo, hi) = set.band_stats();
                minmax_normalize(raw, lo, hi)?
            } else {
                minmax_normalize(raw, 0.0, 255.0)?
            };
            Ok(to_u8(&zernike_core::crop(&band, &set.grid())))
        })
        .collect::<Result<Vec<_>>>()?;
    save_image(&args.output, &pixels)?;
    Ok(ReconstructSummary {
        bands: sets.len(),
        order_cap: cap,
        normalized,
        pixels,
    })
}

// ---------------------------------------------------------------------------
// roundtrip

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub band: String,
    pub order: u32,
    pub method: RadialMethod,
    pub neumann: bool,
    pub eps1: f64,
    pub eps: f64,
    pub psnr_paper: f64,
}

#[derive(Debug, Clone)]
pub struct RoundtripConfig {
    pub orders: Vec<u32>,
    pub methods: Vec<RadialMethod>,
    pub neumann: Vec<bool>,
    pub symmetry: bool,
    /// Compare the original against reconstructions mapped onto its range.
    pub normalize: bool,
}

/// Error rows and per-configuration wall-time notes.
pub fn roundtrip_rows(
    bands: &[Array2<f64>],
    names: &[&str],
    config: &RoundtripConfig,
) -> Result<(Vec<ExperimentRow>, Vec<String>)> {
    let Some(&n_max) = config.orders.iter().max() else {
        return Err(ZernikeError::param("no orders requested"));
    };
    let grids = band_grids(bands)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for (grid, name) in grids.iter().zip(names) {
        for &method in &config.methods {
            for &neumann in &config.neumann {
                let t = Instant::now();
                let opts = MomentOptions {
                    method,
                    neumann,
                    symmetry: config.symmetry,
                };
                let set = compute_moments(grid, n_max, opts)?;
                let recs = reconstruct_orders(&set, &config.orders)?;
                let (lo, hi) = set.band_stats();
                for (&order, rec) in config.orders.iter().zip(&recs) {
                    let rec = if config.normalize {
                        minmax_normalize(rec, lo, hi)?
                    } else {
                        rec.clone()
                    };
                    let r = error_report(grid.band().view(), rec.view())?;
                    rows.push(ExperimentRow {
                        band: (*name).to_string(),
                        order,
                        method,
                        neumann,
                        eps1: r.eps1,
                        eps: r.eps,
                        psnr_paper: r.psnr_paper,
                    });
                }
                notes.push(format!(
                    "band={name} method={method} neumann={neumann} wall_ms={:.1}",
                    t.elapsed().as_secs_f64() * 1e3
                ));
            }
        }
    }
    Ok((rows, notes))
}

pub fn cmd_roundtrip(args: &RoundtripArgs) -> Result<Vec<ExperimentRow>> {
    let (bands, names): (Vec<Array2<f64>>, Vec<&str>) = match &args.input {
        Some(p) => {
            let img = load_image(p)?;
            let names = img.band_names().to_vec();
            (img.bands, names)
        }
        None => (vec![synth::test_image(args.size, args.size, args.seed)], vec!["gray"]),
    };
    let config = RoundtripConfig {
        orders: args.orders.orders(),
        methods: args.methods.clone(),
        neumann: if args.neumann { vec![true] } else { vec![false, true] },
        symmetry: args.symmetry,
        normalize: args.normalize.resolve(false),
    };
    let (rows, mut notes) = roundtrip_rows(&bands, &names, &config)?;
    notes.insert(
        0,
        format!(
            "reconstruction={}",
            if config.normalize { "normalized" } else { "raw" }
        ),
    );
    emit(args.output.as_deref(), &csv_text(&notes, &rows)?)?;
    Ok(rows)
}

// ---------------------------------------------------------------------------
// stability

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub method: RadialMethod,
    pub order: u32,
    pub qf: f64,
}

pub fn stability_rows(
    methods: &[RadialMethod],
    orders: &[u32],
    grid_points: usize,
) -> Result<(Vec<StabilityRow>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut notes = vec![format!("grid_points={grid_points}")];
    for &method in methods {
        let t = Instant::now();
        let report = stability_report(method, orders, grid_points)?;
        rows.extend(
            report
                .orders
                .iter()
                .zip(&report.qf)
                .map(|(&order, &qf)| StabilityRow { method, order, qf }),
        );
        notes.push(format!("method={method} wall_ms={:.1}", t.elapsed().as_secs_f64() * 1e3));
    }
    Ok((rows, notes))
}

pub fn cmd_stability(args: &StabilityArgs) -> Result<Vec<StabilityRow>> {
    let (rows, notes) = stability_rows(&args.methods, &args.orders.orders(), args.grid_points)?;
    emit(args.output.as_deref(), &csv_text(&notes, &rows)?)?;
    Ok(rows)
}

// ---------------------------------------------------------------------------
// bench

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub trials: usize,
    pub order: u32,
    pub single_mean_ms: f64,
    pub single_std_ms: f64,
    pub full_ms: f64,
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    if args.trials == 0 {
        return Err(ZernikeError::param("at least one trial is required"));
    }
    if args.sizes.is_empty() {
        return Err(ZernikeError::param("no sizes given"));
    }
    let opts = MomentOptions {
        method: args.method,
        neumann: false,
        symmetry: args.symmetry,
    };
    // highest repetition of the order: a single, valid coefficient
    let m = args.order as i32;
    args.sizes
        .iter()
        .map(|&size| {
            let img = synth::test_image(size, size, args.seed);
            let grid = ImageGrid::embed(img.view())?;
            let samples = (0..args.trials)
                .map(|_| {
                    let t = Instant::now();
                    compute_moment(&grid, args.order, m, opts)?;
                    Ok(t.elapsed().as_secs_f64() * 1e3)
                })
                .collect::<Result<Vec<_>>>()?;
            let (mean, std) = mean_std(&samples);
            let t = Instant::now();
            compute_moments(&grid, args.order, opts)?;
            Ok(BenchRow {
                size,
                trials: args.trials,
                order: args.order,
                single_mean_ms: mean,
                single_std_ms: std,
                full_ms: t.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

/// Least-squares slope of `log(time)` against `log(size)`.
pub fn log_log_slope(rows: &[BenchRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.size as f64).ln(), r.single_mean_ms.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    let rows = bench_rows(args)?;
    let mut notes = vec![format!("method={} symmetry={}", args.method, args.symmetry)];
    if rows.len() > 1 {
        notes.push(format!("single_moment_log_log_slope={:.3}", log_log_slope(&rows)));
    }
    emit(args.output.as_deref(), &csv_text(&notes, &rows)?)?;
    Ok(rows)
}

// ---------------------------------------------------------------------------
// dedup

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedupStats {
    pub images: usize,
    pub signatures_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedupReport {
    pub groups: Vec<Vec<String>>,
    pub verified: bool,
    pub skipped: Vec<String>,
    pub stats: DedupStats,
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = fs::read_dir(dir)
        .map_err(|e| ZernikeError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| ZernikeError::io(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    Ok(files)
}

pub fn dedup_dir(dir: &Path, config: SignatureConfig) -> Result<DedupReport> {
    let files = list_files(dir)?;
    let t = Instant::now();
    let outcomes: Vec<Result<zernike_core::Signature>> = files
        .par_iter()
        .enumerate()
        .map(|(k, path)| {
            let img = load_image(path)?;
            let views: Vec<_> = img.bands.iter().map(|b| b.view()).collect();
            zm_signature(&views, config, k)
        })
        .collect();
    let signatures_ms = t.elapsed().as_secs_f64() * 1e3;

    let mut signatures = Vec::new();
    let mut skipped = Vec::new();
    for (path, outcome) in files.iter().zip(outcomes) {
        match outcome {
            Ok(s) => signatures.push(s),
            // invalid configurations are not per-file problems
            Err(e @ ZernikeError::Parameter(_)) => return Err(e),
            Err(_) => skipped.push(path.display().to_string()),
        }
    }
    let groups = find_duplicates(&signatures, |a, b| {
        Ok(load_image(&files[a])?.bands == load_image(&files[b])?.bands)
    })?;
    Ok(DedupReport {
        groups: groups
            .groups
            .iter()
            .map(|g| g.iter().map(|&k| files[k].display().to_string()).collect())
            .collect(),
        verified: groups.verified,
        skipped,
        stats: DedupStats {
            images: signatures.len(),
            signatures_ms,
        },
    })
}

pub fn cmd_dedup(args: &DedupArgs) -> Result<DedupReport> {
    let config = SignatureConfig {
        orders: args.order,
        decimals: args.quantize,
    };
    let report = dedup_dir(&args.input, config)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| ZernikeError::param(e.to_string()))?;
    text.push('\n');
    emit(args.output.as_deref(), &text)?;
    Ok(report)
}

// ---------------------------------------------------------------------------
// synth

/// Writes the images and returns the written paths with any planted pairs.
pub fn cmd_synth(args: &SynthArgs) -> Result<(Vec<PathBuf>, Vec<(usize, usize)>)> {
    if args.size == 0 {
        return Err(ZernikeError::param("size must be positive"));
    }
    let Some(count) = args.corpus else {
        let bands: Vec<Array2<u8>> = if args.color {
            synth::test_image_rgb(args.size, args.size, args.seed)
                .iter()
                .map(to_u8)
                .collect()
        } else {
            vec![to_u8(&synth::test_image(args.size, args.size, args.seed))]
        };
        save_image(&args.output, &bands)?;
        return Ok((vec![args.output.clone()], Vec::new()));
    };
    fs::create_dir_all(&args.output).map_err(|e| ZernikeError::io(&args.output, e))?;
    let (images, pairs) = synth::dedup_corpus(count, args.size, args.duplicates, args.seed);
    let width = count.saturating_sub(1).to_string().len().max(4);
    let paths = images
        .par_iter()
        .enumerate()
        .map(|(k, img)| {
            let p = args.output.join(format!("img_{k:0width$}.png"));
            save_image(&p, &[to_u8(img)])?;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((paths, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slope_of_power_law() {
        let rows: Vec<BenchRow> = [64usize, 128, 256]
            .iter()
            .map(|&size| BenchRow {
                size,
                trials: 1,
                order: 0,
                single_mean_ms: 3.0 * (size as f64).powi(2),
                single_std_ms: 0.0,
                full_ms: 0.0,
            })
            .collect();
        assert!((log_log_slope(&rows) - 2.0).abs() < 1e-12);
    }
}
