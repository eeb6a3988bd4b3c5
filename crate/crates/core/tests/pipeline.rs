//! End-to-end checks through the public API: embed, forward, inverse, measure.

use std::sync::Arc;

use ndarray::Array2;
use zernike_core::dedup::SignatureConfig;
use zernike_core::grid::in_disc;
use zernike_core::synth::{test_image, test_image_rgb, DEFAULT_SEED};
use zernike_core::*;

fn fft() -> MomentOptions {
    MomentOptions::default()
}

fn constant_band(size: usize, value: f64) -> ImageGrid {
    let meta = GridMeta {
        size,
        original_width: size,
        original_height: size,
        offset_row: 0,
        offset_col: 0,
    };
    let geometry = Arc::new(DiscGeometry::new(size).unwrap());
    ImageGrid::from_embedded(Array2::from_elem((size, size), value), meta, geometry).unwrap()
}

#[test]
fn embedding_of_the_reference_size() {
    let meta = GridMeta::for_image(256, 256).unwrap();
    assert_eq!(meta.size, 383);
    assert_eq!((meta.offset_row, meta.offset_col), (63, 63));

    let tiny = GridMeta::for_image(1, 1).unwrap();
    assert_eq!(tiny.size % 2, 1);
    let c = (tiny.size - 1) / 2;
    assert_eq!(pixel_to_polar(c, c, tiny.size), (0.0, 0.0));
    assert_eq!((tiny.offset_row, tiny.offset_col), (c, c));
}

#[test]
fn constant_unit_band_has_unit_mean_moment() {
    let grid = constant_band(383, 1.0);
    let plain = compute_moments(&grid, 0, fft()).unwrap();
    let z00 = plain.get(0, 0).unwrap();
    assert!((z00.re - 1.0).abs() < 0.02 && z00.im == 0.0, "{z00}");

    let halved = compute_moments(&grid, 0, MomentOptions { neumann: true, ..fft() }).unwrap();
    assert!((halved.get(0, 0).unwrap().re - z00.re / 2.0).abs() < 1e-15);
}

#[test]
fn single_unit_coefficient_rebuilds_a_flat_disc() {
    let meta = GridMeta::for_image(16, 16).unwrap();
    let pairs = zernike_core::pairs::pair_count(4);
    let mut coeffs = vec![num_complex::Complex64::new(0.0, 0.0); pairs];
    coeffs[0] = num_complex::Complex64::new(1.0, 0.0);
    let set = MomentSet::from_parts(4, RadialMethod::Fft, false, meta, (0.0, 1.0), coeffs).unwrap();
    let band = reconstruct(&set, 4).unwrap().into_bands().remove(0);
    for ((i, j), &v) in band.indexed_iter() {
        let want = if in_disc(i, j, meta.size) { 1.0 } else { 0.0 };
        assert!((v - want).abs() < 1e-14, "({i},{j}) = {v}");
    }
    assert!(reconstruct(&set, 5).is_err());
}

#[test]
fn zero_image_round_trip_stays_zero() {
    let grid = embed_image(Array2::zeros((20, 20)).view()).unwrap();
    let set = compute_moments(&grid, 12, fft()).unwrap();
    let band = reconstruct(&set, 12).unwrap().into_bands().remove(0);
    assert!(band.iter().all(|&v| v == 0.0));
}

#[test]
fn single_basis_function_keeps_its_energy() {
    // band = Re V_nm on the disc; the forward pass must put nearly all weight on (n, m)
    let meta = GridMeta::for_image(256, 256).unwrap();
    let geometry = Arc::new(DiscGeometry::new(meta.size).unwrap());
    for &(n, m) in &[(0u32, 0u32), (3, 1), (8, 4), (20, 0), (31, 7), (50, 50)] {
        let table = radial_table(n, geometry.radii(), RadialMethod::Fft).unwrap();
        let mut band = Array2::zeros((meta.size, meta.size));
        for p in geometry.pixels() {
            let r = table.get(n, m, p.radius_index as usize).unwrap();
            band[[p.row as usize, p.col as usize]] = r * (f64::from(m) * p.theta).cos();
        }
        let grid = ImageGrid::from_embedded(band.clone(), meta, Arc::clone(&geometry)).unwrap();
        let cap = n + 4;
        let set = compute_moments(&grid, cap, fft()).unwrap();
        let main = set.get(n, m as i32).unwrap().norm();
        for (k, l, z) in set.iter() {
            if (k, l) != (n, m) {
                assert!(z.norm() <= 0.05 * main, "(n={n}, m={m}): leak into ({k},{l}) = {} vs {main}", z.norm());
            }
        }
        let rebuilt = reconstruct(&set, cap).unwrap().into_bands().remove(0);
        let rel = epsilon1(band.view(), rebuilt.view()).unwrap();
        assert!(rel < 0.05, "(n={n}, m={m}): relative error {rel}");
    }
}

#[test]
fn higher_orders_reconstruct_better() {
    let img = test_image(64, 64, DEFAULT_SEED);
    let grid = embed_image(img.view()).unwrap();
    let set = compute_moments(&grid, 80, fft()).unwrap();
    let caps = [10, 20, 40, 80];
    let bands = reconstruct_orders(&set, &caps).unwrap();
    let errs: Vec<f64> = bands.iter().map(|b| epsilon(grid.band().view(), b.view()).unwrap()).collect();
    assert!(errs[3] < errs[0], "{errs:?}");
    for w in errs.windows(2) {
        assert!(w[1] <= w[0] + 1e-4, "{errs:?}");
    }
}

#[test]
fn color_bands_are_independent() {
    let gray = test_image(24, 20, 3);
    let views = [gray.view(), gray.view(), gray.view()];
    let sets = compute_moments_color(&views, 10, fft()).unwrap();
    assert_eq!(sets[0], sets[1]);
    assert_eq!(sets[1], sets[2]);

    let [r, g, b] = test_image_rgb(24, 20, 5);
    let r = r.mapv(|_| 0.0);
    let sets = compute_moments_color(&[r.view(), g.view(), b.view()], 10, fft()).unwrap();
    assert!(sets[0].coefficients().iter().all(|z| z.norm() == 0.0));
    for (set, band) in sets.iter().zip([&r, &g, &b]) {
        let lo = band.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = band.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(set.band_stats(), (lo, hi));
    }

    let short = Array2::zeros((24, 19));
    assert!(compute_moments_color(&[gray.view(), gray.view(), short.view()], 4, fft()).is_err());

    let rebuilt = reconstruct_color(&sets, 10).unwrap();
    assert_eq!(rebuilt.bands().len(), 3);
}

#[test]
fn error_measure_examples() {
    let size = 9;
    let disc = (0..size * size).filter(|k| in_disc(k / size, k % size, size)).count();
    let twos = Array2::from_elem((size, size), 2.0);
    let ones = Array2::from_elem((size, size), 1.0);
    let zeros = Array2::zeros((size, size));

    assert_eq!(epsilon1(twos.view(), twos.view()).unwrap(), 0.0);
    assert_eq!(epsilon1(twos.view(), zeros.view()).unwrap(), 1.0);
    assert_eq!(epsilon2(twos.view(), ones.view()).unwrap(), Some(disc as f64 * 0.25));
    assert_eq!(epsilon2(zeros.view(), ones.view()).unwrap(), None);
    assert_eq!(epsilon(twos.view(), zeros.view()).unwrap(), 1.0);
    assert!(epsilon(zeros.view(), ones.view()).is_err());

    let checker = Array2::from_shape_fn((size, size), |(i, j)| if (i + j) % 2 == 0 { 255.0 } else { 0.0 });
    let inverse = checker.mapv(|v| 255.0 - v);
    assert_eq!(epsilon(checker.view(), inverse.view()).unwrap(), 1.0);

    // disjoint supports push the relative measure past one
    let left = Array2::from_shape_fn((size, size), |(_, j)| if j < 4 { 1.0 } else { 0.0 });
    let right = Array2::from_shape_fn((size, size), |(_, j)| if j > 4 { 3.0 } else { 0.0 });
    assert!(epsilon1(left.view(), right.view()).unwrap() > 1.0);
}

#[test]
fn quality_factor_examples() {
    assert!(stability_qf(RadialMethod::Fft, 0, 10_000).unwrap() < 1e-5);
    let report = stability_report(RadialMethod::Fft, &[100, 300], 10_000).unwrap();
    assert!(report.qf.iter().all(|&q| (0.0..=0.01).contains(&q)), "{:?}", report.qf);
}

#[test]
fn duplicate_search_examples() {
    let config = SignatureConfig::default();
    let (mut images, _) = synth::dedup_corpus(5, 16, 0, 11);
    images[4] = images[2].clone();
    let sigs: Vec<_> = images
        .iter()
        .enumerate()
        .map(|(k, img)| zm_signature(&[img.view()], config, k).unwrap())
        .collect();
    assert_eq!(sigs[2].per_order, sigs[4].per_order);
    let found = find_duplicates(&sigs, |a, b| Ok(images[a] == images[b])).unwrap();
    assert!(found.verified);
    assert_eq!(found.groups, vec![vec![2, 4]]);

    // one pixel moved across the full gray range must show up in the signature
    let mut edited = images[0].clone();
    edited[[5, 7]] = if edited[[5, 7]] < 128.0 { 255.0 } else { 0.0 };
    let a = zm_signature(&[images[0].view()], config, 0).unwrap();
    let b = zm_signature(&[edited.view()], config, 1).unwrap();
    assert_ne!(a.per_order, b.per_order);

    assert!(find_duplicates(&[], |_, _| Ok(true)).unwrap().groups.is_empty());
}
