//! Image files and the JSON moment file.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use image::{DynamicImage, GrayImage, ImageFormat, ImageReader, RgbImage};
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};
use crate::grid::GridMeta;
use crate::moments::MomentSet;
use crate::pairs::{pair_count, pair_index, pairs};
use crate::radial::RadialMethod;

pub const FORMAT_VERSION: u32 = 1;

const LOSSLESS: [ImageFormat; 4] = [ImageFormat::Png, ImageFormat::Bmp, ImageFormat::Tiff, ImageFormat::Pnm];

/// Decoded 8-bit image as `f64` bands: one for gray, three for RGB.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedImage {
    pub bands: Vec<Array2<f64>>,
}

impl LoadedImage {
    pub fn is_color(&self) -> bool {
        self.bands.len() == 3
    }

    /// `(rows, cols)`.
    pub fn dim(&self) -> (usize, usize) {
        self.bands[0].dim()
    }

    pub fn band_names(&self) -> &'static [&'static str] {
        if self.is_color() {
            &["R", "G", "B"]
        } else {
            &["gray"]
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<LoadedImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|e| ZernikeError::io(path, e))?;
    let format = match reader.format() {
        Some(f) if LOSSLESS.contains(&f) => f,
        Some(f) => return Err(ZernikeError::io(path, format!("unsupported format {f:?}"))),
        None => return Err(ZernikeError::io(path, "unrecognized image format")),
    };
    let img = reader.decode().map_err(|e| ZernikeError::io(path, e))?;
    let bands = match img {
        DynamicImage::ImageLuma8(g) => {
            let (w, h) = g.dimensions();
            vec![Array2::from_shape_fn((h as usize, w as usize), |(i, j)| {
                f64::from(g.get_pixel(j as u32, i as u32)[0])
            })]
        }
        DynamicImage::ImageRgb8(c) => {
            let (w, h) = c.dimensions();
            (0..3)
                .map(|k| {
                    Array2::from_shape_fn((h as usize, w as usize), |(i, j)| {
                        f64::from(c.get_pixel(j as u32, i as u32)[k])
                    })
                })
                .collect()
        }
        other => {
            return Err(ZernikeError::io(
                path,
                format!("only 8-bit gray or RGB images are supported, got {:?}", other.color()),
            ))
        }
    };
    if bands[0].is_empty() {
        return Err(ZernikeError::io(path, "image has no pixels"));
    }
    // 8-bit gray BMPs are palette images and decode as RGB
    if format == ImageFormat::Bmp && bands.len() == 3 && bands[0] == bands[1] && bands[1] == bands[2] {
        return Ok(LoadedImage { bands: vec![bands.into_iter().next().expect("three bands")] });
    }
    Ok(LoadedImage { bands })
}

/// Rounds and clamps to `0..=255`.
pub fn to_u8(band: &Array2<f64>) -> Array2<u8> {
    band.mapv(|v| if v.is_nan() { 0 } else { v.round().clamp(0.0, 255.0) as u8 })
}

/// Writes one gray or three RGB bands; the format follows the file extension
/// and must be lossless.
pub fn save_image(path: impl AsRef<Path>, bands: &[Array2<u8>]) -> Result<()> {
    let path = path.as_ref();
    let format = ImageFormat::from_path(path).map_err(|e| ZernikeError::io(path, e))?;
    if !LOSSLESS.contains(&format) {
        return Err(ZernikeError::io(path, format!("refusing to write lossy or unsupported format {format:?}")));
    }
    let (h, w) = match bands {
        [b] | [b, _, _] => b.dim(),
        _ => return Err(ZernikeError::param(format!("expected 1 or 3 bands, got {}", bands.len()))),
    };
    if bands.iter().any(|b| b.dim() != (h, w)) {
        return Err(ZernikeError::param("band shapes differ"));
    }
    let img = if bands.len() == 1 {
        DynamicImage::ImageLuma8(GrayImage::from_fn(w as u32, h as u32, |x, y| {
            image::Luma([bands[0][[y as usize, x as usize]]])
        }))
    } else {
        DynamicImage::ImageRgb8(RgbImage::from_fn(w as u32, h as u32, |x, y| {
            let (i, j) = (y as usize, x as usize);
            image::Rgb([bands[0][[i, j]], bands[1][[i, j]], bands[2][[i, j]]])
        }))
    };
    img.save_with_format(path, format).map_err(|e| ZernikeError::io(path, e))
}

/// One band of a moment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandBlock {
    pub name: String,
    pub min: f64,
    pub max: f64,
    /// `(n, m, re, im)` with `m >= 0`, ascending by `n` then `m`.
    pub coefficients: Vec<(u32, u32, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentFile {
    pub format_version: u32,
    pub method: RadialMethod,
    pub neumann: bool,
    pub n_max: u32,
    pub grid: GridMeta,
    pub bands: Vec<BandBlock>,
}

impl MomentFile {
    /// Packs one gray set or three R, G, B sets.
    pub fn from_sets(sets: &[MomentSet]) -> Result<Self> {
        let names: &[&str] = match sets.len() {
            1 => &["gray"],
            3 => &["R", "G", "B"],
            k => return Err(ZernikeError::param(format!("expected 1 or 3 moment sets, got {k}"))),
        };
        let first = &sets[0];
        if sets.iter().any(|s| {
            s.n_max() != first.n_max()
                || s.method() != first.method()
                || s.neumann() != first.neumann()
                || s.grid() != first.grid()
        }) {
            return Err(ZernikeError::param("moment sets disagree on order, method or grid"));
        }
        let bands = sets
            .iter()
            .zip(names)
            .map(|(set, name)| {
                let (min, max) = set.band_stats();
                BandBlock {
                    name: (*name).to_string(),
                    min,
                    max,
                    coefficients: set.iter().map(|(n, m, z)| (n, m, z.re, z.im)).collect(),
                }
            })
            .collect();
        Ok(Self {
            format_version: FORMAT_VERSION,
            method: first.method(),
            neumann: first.neumann(),
            n_max: first.n_max(),
            grid: first.grid(),
            bands,
        })
    }

    /// Unpacks into moment sets after checking the schema invariants.
    pub fn to_sets(&self) -> Result<Vec<MomentSet>> {
        if self.format_version != FORMAT_VERSION {
            return Err(ZernikeError::param(format!(
                "unsupported moment file version {}",
                self.format_version
            )));
        }
        let expected: &[&str] = match self.bands.len() {
            1 => &["gray"],
            3 => &["R", "G", "B"],
            k => return Err(ZernikeError::param(format!("expected 1 or 3 bands, got {k}"))),
        };
        let order: Vec<(u32, u32)> = pairs(self.n_max).collect();
        self.bands
            .iter()
            .zip(expected)
            .map(|(band, name)| {
                if band.name != *name {
                    return Err(ZernikeError::param(format!(
                        "band named {:?} where {name:?} was expected",
                        band.name
                    )));
                }
                if band.coefficients.len() != pair_count(self.n_max)
                    || band.coefficients.iter().zip(&order).any(|(c, p)| (c.0, c.1) != *p)
                {
                    return Err(ZernikeError::param(format!(
                        "band {name}: coefficient list does not enumerate the pairs up to order {}",
                        self.n_max
                    )));
                }
                let mut coeffs = vec![Complex64::default(); pair_count(self.n_max)];
                for &(n, m, re, im) in &band.coefficients {
                    coeffs[pair_index(n, m)] = Complex64::new(re, im);
                }
                MomentSet::from_parts(
                    self.n_max,
                    self.method,
                    self.neumann,
                    self.grid,
                    (band.min, band.max),
                    coeffs,
                )
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| ZernikeError::param(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ZernikeError::Parse {
            offset: byte_offset(text, e.line(), e.column()),
            reason: e.to_string(),
        })
    }
}

/// Byte offset of a 1-based line and column as reported by the JSON parser.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

pub fn write_moment_file(path: impl AsRef<Path>, sets: &[MomentSet]) -> Result<()> {
    let path = path.as_ref();
    let file = MomentFile::from_sets(sets)?;
    let out = fs::File::create(path).map_err(|e| ZernikeError::io(path, e))?;
    let mut w = BufWriter::new(out);
    serde_json::to_writer_pretty(&mut w, &file).map_err(|e| ZernikeError::io(path, e))?;
    use std::io::Write;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| ZernikeError::io(path, e))
}

pub fn read_moment_file(path: impl AsRef<Path>) -> Result<Vec<MomentSet>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ZernikeError::io(path, e))?;
    MomentFile::from_json(&text)?.to_sets()
}
