//! Embedding of image bands in a zero-padded square grid mapped onto the unit disc.

use std::collections::HashMap;
use std::f64::consts::SQRT_2;
use std::sync::Arc;

use ndarray::{s, Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZernikeError};

/// Placement of an original image inside its embedding grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridMeta {
    /// Side `M` of the square embedding grid (always odd).
    pub size: usize,
    pub original_width: usize,
    pub original_height: usize,
    pub offset_row: usize,
    pub offset_col: usize,
}

impl GridMeta {
    pub fn for_image(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(ZernikeError::param("empty image"));
        }
        let size = embedded_size(rows, cols);
        Ok(Self {
            size,
            original_width: cols,
            original_height: rows,
            offset_row: (size - rows) / 2,
            offset_col: (size - cols) / 2,
        })
    }

    /// Pixel width `2 / M`.
    pub fn delta(&self) -> f64 {
        2.0 / self.size as f64
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.size % 2 == 0
            || self.original_width == 0
            || self.original_height == 0
            || self.offset_row + self.original_height > self.size
            || self.offset_col + self.original_width > self.size
        {
            return Err(ZernikeError::param(format!("inconsistent grid metadata {self:?}")));
        }
        Ok(())
    }
}

/// `N + ceil(N (sqrt 2 - 1)) + 20` with `N = max(rows, cols)`, bumped to odd.
pub fn embedded_size(rows: usize, cols: usize) -> usize {
    let n = rows.max(cols);
    let mut size = n + (n as f64 * (SQRT_2 - 1.0)).ceil() as usize + 20;
    if size % 2 == 0 {
        size += 1;
    }
    size
}

/// Polar coordinates of the centre of pixel `(i, j)` in an `M x M` grid.
///
/// `x = (2j + 1 - M) / M`, `y = (M - 1 - 2i) / M` (row 0 at the top);
/// `theta` is the quadrant-correct arctangent in `(-pi, pi]`, zero at the origin.
pub fn pixel_to_polar(i: usize, j: usize, size: usize) -> (f64, f64) {
    let m = size as i64;
    let a = 2 * j as i64 + 1 - m;
    let b = m - 1 - 2 * i as i64;
    let x = a as f64 / size as f64;
    let y = b as f64 / size as f64;
    (x.hypot(y), y.atan2(x))
}

/// Whether the centre of pixel `(i, j)` of an odd `M x M` grid lies in the closed unit disc.
pub fn in_disc(i: usize, j: usize, size: usize) -> bool {
    let m = size as i64;
    let a = 2 * j as i64 + 1 - m;
    let b = m - 1 - 2 * i as i64;
    (a * a + b * b) as u64 <= (size * size) as u64
}

/// A grid pixel whose centre lies inside the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPixel {
    pub row: u32,
    pub col: u32,
    pub rho: f64,
    pub theta: f64,
    /// Position of `rho` in the geometry's distinct-radius list.
    pub radius_index: u32,
}

/// One pixel of an 8-fold orbit: angle `sign * theta0 + quarter * pi / 2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OrbitMember {
    pub flat: u32,
    pub negate: bool,
    pub quarter: u8,
}

/// Pixels sharing one radius under the reflections of the square.
#[derive(Debug, Clone)]
pub(crate) struct Orbit {
    pub radius_index: u32,
    /// Representative angle in `[0, pi/4]`.
    pub theta: f64,
    pub members: Vec<OrbitMember>,
}

/// Disc pixels, distinct radii and symmetry orbits of an `M x M` grid.
#[derive(Debug)]
pub struct DiscGeometry {
    size: usize,
    pixels: Vec<DiscPixel>,
    radii: Vec<f64>,
    /// Pixel positions (into `pixels`) grouped by radius, CSR style.
    by_radius: Vec<u32>,
    radius_start: Vec<usize>,
    orbits: Vec<Orbit>,
    orbit_start: Vec<usize>,
    /// Flat grid index -> position in `pixels`, `u32::MAX` outside the disc.
    lookup: Vec<u32>,
}

impl DiscGeometry {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size % 2 == 0 {
            return Err(ZernikeError::param(format!("grid size {size} must be odd")));
        }
        let c = (size as i64 - 1) / 2;
        let m2 = (size * size) as u64;
        // a = 2p, b = 2q in pixel half-units; inside iff 4(p^2 + q^2) <= M^2
        let key = |p: i64, q: i64| (p * p + q * q) as u64;
        let inside = |k: u64| 4 * k <= m2;

        let mut keys: Vec<u64> = (0..=c)
            .flat_map(|p| (0..=p).map(move |q| key(p, q)))
            .filter(|&k| inside(k))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        let index_of: HashMap<u64, u32> =
            keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let radii: Vec<f64> = keys
            .iter()
            .map(|&k| (2.0 * (k as f64).sqrt() / size as f64).min(1.0))
            .collect();

        let mut pixels = Vec::new();
        let mut lookup = vec![u32::MAX; size * size];
        for i in 0..size {
            for j in 0..size {
                let p = j as i64 - c;
                let q = c - i as i64;
                let k = key(p, q);
                if !inside(k) {
                    continue;
                }
                let radius_index = index_of[&k];
                let (_, theta) = pixel_to_polar(i, j, size);
                lookup[i * size + j] = pixels.len() as u32;
                pixels.push(DiscPixel {
                    row: i as u32,
                    col: j as u32,
                    rho: radii[radius_index as usize],
                    theta,
                    radius_index,
                });
            }
        }

        let (by_radius, radius_start) = group_by(radii.len(), pixels.len(), |k| {
            pixels[k].radius_index as usize
        });

        let mut orbits = Vec::new();
        for p in 0..=c {
            for q in 0..=p {
                let k = key(p, q);
                if !inside(k) {
                    continue;
                }
                let mut members: Vec<OrbitMember> = Vec::with_capacity(8);
                for negate in [false, true] {
                    let (mut x, mut y) = (p, if negate { -q } else { q });
                    for quarter in 0..4u8 {
                        let flat = ((c - y) * size as i64 + (c + x)) as u32;
                        if !members.iter().any(|mm| mm.flat == flat) {
                            members.push(OrbitMember {
                                flat,
                                negate,
                                quarter,
                            });
                        }
                        (x, y) = (-y, x);
                    }
                }
                orbits.push(Orbit {
                    radius_index: index_of[&k],
                    theta: (q as f64).atan2(p as f64),
                    members,
                });
            }
        }
        orbits.sort_by_key(|o| o.radius_index);
        let mut orbit_start = vec![0usize; radii.len() + 1];
        for o in &orbits {
            orbit_start[o.radius_index as usize + 1] += 1;
        }
        for r in 0..radii.len() {
            orbit_start[r + 1] += orbit_start[r];
        }

        Ok(Self {
            size,
            pixels,
            radii,
            by_radius,
            radius_start,
            orbits,
            orbit_start,
            lookup,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Disc pixels in row-major order.
    pub fn pixels(&self) -> &[DiscPixel] {
        &self.pixels
    }

    /// Distinct pixel radii, ascending.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Whether the flat grid index `i * M + j` lies in the disc.
    pub fn contains(&self, flat: usize) -> bool {
        self.lookup.get(flat).is_some_and(|&v| v != u32::MAX)
    }

    /// Disc pixels (positions into [`Self::pixels`]) with radius index `r`.
    pub(crate) fn pixels_at(&self, r: usize) -> &[u32] {
        &self.by_radius[self.radius_start[r]..self.radius_start[r + 1]]
    }

    pub(crate) fn orbits_at(&self, r: usize) -> &[Orbit] {
        &self.orbits[self.orbit_start[r]..self.orbit_start[r + 1]]
    }
}

/// Stable CSR grouping of `0..count` by `bucket(k) < buckets`.
fn group_by(buckets: usize, count: usize, bucket: impl Fn(usize) -> usize) -> (Vec<u32>, Vec<usize>) {
    let mut start = vec![0usize; buckets + 1];
    for k in 0..count {
        start[bucket(k) + 1] += 1;
    }
    for b in 0..buckets {
        start[b + 1] += start[b];
    }
    let mut fill = start.clone();
    let mut items = vec![0u32; count];
    for k in 0..count {
        let b = bucket(k);
        items[fill[b]] = k as u32;
        fill[b] += 1;
    }
    (items, start)
}

/// A band embedded centrally in an odd `M x M` zero grid.
#[derive(Debug, Clone)]
pub struct ImageGrid {
    band: Array2<f64>,
    meta: GridMeta,
    geometry: Arc<DiscGeometry>,
}

impl ImageGrid {
    /// Embeds `pixels` into a fresh geometry.
    pub fn embed(pixels: ArrayView2<'_, f64>) -> Result<Self> {
        let meta = GridMeta::for_image(pixels.nrows(), pixels.ncols())?;
        let geometry = Arc::new(DiscGeometry::new(meta.size)?);
        Self::with_geometry(pixels, geometry)
    }

    /// Embeds `pixels` reusing a geometry of the matching size.
    pub fn with_geometry(pixels: ArrayView2<'_, f64>, geometry: Arc<DiscGeometry>) -> Result<Self> {
        let meta = GridMeta::for_image(pixels.nrows(), pixels.ncols())?;
        if geometry.size() != meta.size {
            return Err(ZernikeError::param(format!(
                "geometry of size {} does not fit a {}x{} image",
                geometry.size(),
                pixels.nrows(),
                pixels.ncols()
            )));
        }
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(ZernikeError::param("image contains non-finite pixels"));
        }
        let mut band = Array2::zeros((meta.size, meta.size));
        band.slice_mut(s![
            meta.offset_row..meta.offset_row + meta.original_height,
            meta.offset_col..meta.offset_col + meta.original_width
        ])
        .assign(&pixels);
        Ok(Self {
            band,
            meta,
            geometry,
        })
    }

    /// Wraps an already embedded `M x M` band.
    pub fn from_embedded(band: Array2<f64>, meta: GridMeta, geometry: Arc<DiscGeometry>) -> Result<Self> {
        meta.validate()?;
        if band.dim() != (meta.size, meta.size) || geometry.size() != meta.size {
            return Err(ZernikeError::param("embedded band does not match its metadata"));
        }
        Ok(Self {
            band,
            meta,
            geometry,
        })
    }

    pub fn band(&self) -> &Array2<f64> {
        &self.band
    }

    pub fn meta(&self) -> GridMeta {
        self.meta
    }

    pub fn size(&self) -> usize {
        self.meta.size
    }

    /// `(width, height)` of the source image.
    pub fn original_size(&self) -> (usize, usize) {
        (self.meta.original_width, self.meta.original_height)
    }

    /// `(row, col)` of the source image inside the grid.
    pub fn offset(&self) -> (usize, usize) {
        (self.meta.offset_row, self.meta.offset_col)
    }

    pub fn delta(&self) -> f64 {
        self.meta.delta()
    }

    pub fn disc_pixels(&self) -> &[DiscPixel] {
        self.geometry.pixels()
    }

    pub fn geometry(&self) -> &Arc<DiscGeometry> {
        &self.geometry
    }

    pub(crate) fn flat(&self) -> &[f64] {
        self.band.as_slice().expect("embedded bands are contiguous")
    }
}

/// Embeds a band: [`ImageGrid::embed`].
pub fn embed_image(pixels: ArrayView2<'_, f64>) -> Result<ImageGrid> {
    ImageGrid::embed(pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn reference_sized_embedding() {
        let meta = GridMeta::for_image(256, 256).unwrap();
        assert_eq!(meta.size, 383);
        assert_eq!((meta.offset_row, meta.offset_col), (63, 63));
        // floor(256 (sqrt 2 - 1) / 2) + 10
        assert_eq!(((256.0 * (SQRT_2 - 1.0)) / 2.0).floor() as usize + 10, 63);
    }

    #[test]
    fn single_pixel_embedding() {
        let grid = embed_image(Array2::from_elem((1, 1), 7.0).view()).unwrap();
        assert_eq!(grid.size(), 23);
        assert_eq!(grid.offset(), (11, 11));
        let centre = grid
            .disc_pixels()
            .iter()
            .find(|p| p.row == 11 && p.col == 11)
            .unwrap();
        assert_eq!((centre.rho, centre.theta), (0.0, 0.0));
        assert_eq!(grid.band()[[11, 11]], 7.0);
        assert_eq!(grid.band().sum(), 7.0);
    }

    #[test]
    fn rectangular_embedding_is_centred() {
        let meta = GridMeta::for_image(10, 30).unwrap();
        assert_eq!(meta.size % 2, 1);
        assert_eq!(meta.offset_row, (meta.size - 10) / 2);
        assert_eq!(meta.offset_col, (meta.size - 30) / 2);
        assert!(GridMeta::for_image(0, 3).is_err());
    }

    #[test]
    fn polar_examples() {
        let m = 11;
        let c = (m - 1) / 2;
        assert_eq!(pixel_to_polar(c, c, m), (0.0, 0.0));
        let (rho, theta) = pixel_to_polar(c, m - 1, m);
        assert_eq!(theta, 0.0);
        assert!((rho - (m - 1) as f64 / m as f64).abs() < 1e-15);
        assert!((pixel_to_polar(0, c, m).1 - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(pixel_to_polar(c, 0, m).1, PI);
    }

    #[test]
    fn geometry_invariants() {
        let g = DiscGeometry::new(41).unwrap();
        for p in g.pixels() {
            assert!(p.rho <= 1.0 && p.rho >= 0.0);
            assert!(p.theta > -PI && p.theta <= PI);
            let (rho, theta) = pixel_to_polar(p.row as usize, p.col as usize, 41);
            assert!((rho - p.rho).abs() < 1e-15);
            assert_eq!(theta, p.theta);
        }
        let orbit_pixels: usize = (0..g.radii().len())
            .map(|r| g.orbits_at(r).iter().map(|o| o.members.len()).sum::<usize>())
            .sum();
        assert_eq!(orbit_pixels, g.pixels().len());
        let grouped: usize = (0..g.radii().len()).map(|r| g.pixels_at(r).len()).sum();
        assert_eq!(grouped, g.pixels().len());
        assert!(DiscGeometry::new(40).is_err());
    }

    #[test]
    fn orbit_members_share_radius_and_angle_relation() {
        let g = DiscGeometry::new(31).unwrap();
        for r in 0..g.radii().len() {
            for o in g.orbits_at(r) {
                for mm in &o.members {
                    let pos = g.lookup[mm.flat as usize] as usize;
                    let px = g.pixels()[pos];
                    assert_eq!(px.radius_index, o.radius_index);
                    let sign = if mm.negate { -1.0 } else { 1.0 };
                    let want = sign * o.theta + f64::from(mm.quarter) * FRAC_PI_2;
                    let d = (want - px.theta).rem_euclid(2.0 * PI);
                    assert!(d < 1e-12 || (2.0 * PI - d) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn outside_original_is_zero() {
        let img = Array2::from_elem((5, 9), 3.0);
        let grid = embed_image(img.view()).unwrap();
        let (r0, c0) = grid.offset();
        for ((i, j), &v) in grid.band().indexed_iter() {
            let inside = i >= r0 && i < r0 + 5 && j >= c0 && j < c0 + 9;
            assert_eq!(v, if inside { 3.0 } else { 0.0 });
        }
    }
}
