//! Exact-duplicate detection with per-order moment signatures.

use std::collections::HashMap;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, ZernikeError};
use crate::grid::embed_image;
use crate::moments::{compute_moments, MomentOptions};
use crate::radial::RadialMethod;

pub const DEFAULT_SIGNATURE_ORDERS: u32 = 8;
pub const DEFAULT_DECIMALS: u32 = 6;
/// Largest accepted decimal count; beyond this the scaled values leave `i64`.
pub const MAX_DECIMALS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureConfig {
    /// Signature covers orders `1..=orders`.
    pub orders: u32,
    /// Decimal places kept on each real and imaginary part.
    pub decimals: u32,
}

impl Default for SignatureConfig {
    fn default() -> Self {
        Self {
            orders: DEFAULT_SIGNATURE_ORDERS,
            decimals: DEFAULT_DECIMALS,
        }
    }
}

impl SignatureConfig {
    fn validate(&self) -> Result<()> {
        if self.orders == 0 {
            return Err(ZernikeError::param("signature needs at least one order"));
        }
        if self.decimals > MAX_DECIMALS {
            return Err(ZernikeError::param(format!(
                "at most {MAX_DECIMALS} decimal places are supported, got {}",
                self.decimals
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub image_index: usize,
    pub config: SignatureConfig,
    /// Hash for order `l` at position `l - 1`.
    pub per_order: Vec<u64>,
}

impl Signature {
    /// Hash at order `l` (1-based).
    pub fn at(&self, l: u32) -> Option<u64> {
        l.checked_sub(1).and_then(|i| self.per_order.get(i as usize)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateGroups {
    /// Disjoint index groups of size at least two, each sorted ascending.
    pub groups: Vec<Vec<usize>>,
    pub verified: bool,
}

fn quantize(v: f64, scale: f64) -> Result<i64> {
    if !v.is_finite() {
        return Err(ZernikeError::NonFinite {
            method: "signature",
            order: 0,
        });
    }
    // -0.0 and 0.0 must hash alike
    Ok((v * scale).round() as i64)
}

/// Signature of an image given as one gray band or three color bands.
pub fn zm_signature(
    bands: &[ArrayView2<'_, f64>],
    config: SignatureConfig,
    image_index: usize,
) -> Result<Signature> {
    config.validate()?;
    if bands.is_empty() {
        return Err(ZernikeError::param("image has no bands"));
    }
    let opts = MomentOptions {
        method: RadialMethod::Fft,
        neumann: true,
        symmetry: true,
    };
    let sets = bands
        .iter()
        .map(|b| compute_moments(&embed_image(*b)?, config.orders, opts))
        .collect::<Result<Vec<_>>>()?;
    let scale = 10f64.powi(config.decimals as i32);
    let mut per_order = Vec::with_capacity(config.orders as usize);
    for l in 1..=config.orders {
        let mut hasher = Sha256::new();
        for set in &sets {
            for z in set.order(l) {
                hasher.update(quantize(z.re, scale)?.to_le_bytes());
                hasher.update(quantize(z.im, scale)?.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        per_order.push(u64::from_le_bytes(head));
    }
    Ok(Signature {
        image_index,
        config,
        per_order,
    })
}

/// Index groups that agree at every signature order.
///
/// Groups are refined one order at a time, so the candidates after `l` orders
/// are a subset of those after `l - 1`. Singletons are dropped.
pub fn candidate_groups(signatures: &[Signature]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = signatures.first() else {
        return Ok(Vec::new());
    };
    let config = first.config;
    if signatures
        .iter()
        .any(|s| s.config != config || s.per_order.len() != config.orders as usize)
    {
        return Err(ZernikeError::param("signatures were built with different configurations"));
    }
    let mut groups: Vec<Vec<usize>> = vec![(0..signatures.len()).collect()];
    for l in 0..config.orders as usize {
        let mut next = Vec::new();
        for group in groups {
            let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
            let mut keys = Vec::new();
            for pos in group {
                let h = signatures[pos].per_order[l];
                buckets
                    .entry(h)
                    .or_insert_with(|| {
                        keys.push(h);
                        Vec::new()
                    })
                    .push(pos);
            }
            // first-seen order keeps the output deterministic
            next.extend(keys.into_iter().filter_map(|k| {
                let b = buckets.remove(&k).expect("key was inserted");
                (b.len() >= 2).then_some(b)
            }));
        }
        groups = next;
    }
    Ok(groups
        .into_iter()
        .map(|g| {
            let mut idx: Vec<usize> = g.into_iter().map(|p| signatures[p].image_index).collect();
            idx.sort_unstable();
            idx
        })
        .collect())
}

/// Candidate groups confirmed by `same_pixels(a, b)` on image indices.
///
/// Each candidate group is split into classes of pixel-identical images;
/// classes of size one are dropped.
pub fn find_duplicates<F>(signatures: &[Signature], mut same_pixels: F) -> Result<DuplicateGroups>
where
    F: FnMut(usize, usize) -> Result<bool>,
{
    let mut groups = Vec::new();
    for candidate in candidate_groups(signatures)? {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for idx in candidate {
            let mut placed = false;
            for class in classes.iter_mut() {
                if same_pixels(class[0], idx)? {
                    class.push(idx);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![idx]);
            }
        }
        groups.extend(classes.into_iter().filter(|c| c.len() >= 2));
    }
    groups.sort_unstable();
    Ok(DuplicateGroups {
        groups,
        verified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn image(seed: u64) -> Array2<f64> {
        Array2::from_shape_fn((12, 12), |(i, j)| {
            ((i as u64 * 31 + j as u64 * 17 + seed * 101) % 256) as f64
        })
    }

    fn sig(img: &Array2<f64>, cfg: SignatureConfig, k: usize) -> Signature {
        zm_signature(&[img.view()], cfg, k).unwrap()
    }

    #[test]
    fn identical_images_share_signatures() {
        let a = image(3);
        let cfg = SignatureConfig::default();
        assert_eq!(sig(&a, cfg, 0).per_order, sig(&a.clone(), cfg, 1).per_order);
        assert_eq!(sig(&a, cfg, 0).per_order.len(), 8);
    }

    #[test]
    fn one_pixel_change_is_visible() {
        let a = image(3);
        let mut b = a.clone();
        b[[5, 6]] = if a[[5, 6]] < 128.0 { 255.0 } else { 0.0 };
        let cfg = SignatureConfig::default();
        assert_ne!(sig(&a, cfg, 0).per_order, sig(&b, cfg, 1).per_order);
    }

    #[test]
    fn zero_image_hashes_zero_tuple() {
        let z = Array2::zeros((6, 6));
        let s = sig(&z, SignatureConfig { orders: 3, decimals: 6 }, 0);
        for l in 1..=3u32 {
            let mut h = Sha256::new();
            for _ in 0..(l / 2 + 1) {
                h.update(0i64.to_le_bytes());
                h.update(0i64.to_le_bytes());
            }
            let d = h.finalize();
            assert_eq!(s.at(l), Some(u64::from_le_bytes(d[..8].try_into().unwrap())));
        }
        assert_eq!(s.at(0), None);
        assert_eq!(s.at(4), None);
    }

    #[test]
    fn config_checks() {
        let a = image(1);
        assert!(zm_signature(&[a.view()], SignatureConfig { orders: 0, decimals: 6 }, 0).is_err());
        assert!(zm_signature(&[a.view()], SignatureConfig { orders: 2, decimals: 13 }, 0).is_err());
        let s1 = sig(&a, SignatureConfig::default(), 0);
        let s2 = sig(&a, SignatureConfig { orders: 8, decimals: 3 }, 1);
        assert!(candidate_groups(&[s1, s2]).is_err());
    }

    #[test]
    fn groups_in_small_dataset() {
        let imgs = [image(0), image(1), image(2), image(3), image(2)];
        let cfg = SignatureConfig::default();
        let sigs: Vec<_> = imgs.iter().enumerate().map(|(k, im)| sig(im, cfg, k)).collect();
        let out = find_duplicates(&sigs, |a, b| Ok(imgs[a] == imgs[b])).unwrap();
        assert_eq!(out.groups, vec![vec![2, 4]]);
        assert!(out.verified);
        assert!(find_duplicates(&[], |_, _| Ok(true)).unwrap().groups.is_empty());
    }

    #[test]
    fn verification_removes_forced_collisions() {
        // two images one gray level apart collide at zero decimals
        let a = Array2::from_elem((8, 8), 100.0);
        let b = Array2::from_elem((8, 8), 100.0 + 1e-3);
        let cfg = SignatureConfig { orders: 2, decimals: 0 };
        let sigs = vec![sig(&a, cfg, 0), sig(&b, cfg, 1)];
        assert_eq!(candidate_groups(&sigs).unwrap(), vec![vec![0, 1]]);
        let imgs = [a, b];
        let out = find_duplicates(&sigs, |x, y| Ok(imgs[x] == imgs[y])).unwrap();
        assert!(out.groups.is_empty());
    }
}
