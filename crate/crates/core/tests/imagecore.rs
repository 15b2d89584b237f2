mod common;

use albedo_bench::imagecore::{
    adobe_linear_to_srgb_linear, adobe_to_srgb_matrix, ciede2000, gaussian_blur, gaussian_blur_gray,
    largest_inscribed_rect, linear_srgb_to_lab, masked_gaussian_blur, rasterize_polygons, resample_bilinear,
    resample_bilinear_window, srgb_decode, srgb_decode_value, srgb_encode, srgb_encode_value, to_grayscale,
    GrayImage, Lab, LinearImage, PixelMask, Polygon, Rect,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn lab_reference_colors() {
    let white = linear_srgb_to_lab([1.0, 1.0, 1.0]);
    assert!((white.l - 100.0).abs() < 1e-9 && white.a.abs() < 1e-9 && white.b.abs() < 1e-9);
    // Published D65 values for the sRGB primaries.
    for (rgb, lab) in [
        ([1.0, 0.0, 0.0], [53.24, 80.09, 67.20]),
        ([0.0, 1.0, 0.0], [87.73, -86.18, 83.18]),
        ([0.0, 0.0, 1.0], [32.30, 79.19, -107.86]),
    ] {
        let got = linear_srgb_to_lab(rgb);
        for (g, e) in [got.l, got.a, got.b].into_iter().zip(lab) {
            assert!((g - e).abs() < 0.05, "{rgb:?}: {got:?}");
        }
    }
    let mid = linear_srgb_to_lab([0.18; 3]);
    assert!((mid.l - 49.5).abs() < 0.1 && mid.a.abs() < 1e-9);
}

#[test]
fn adobe_to_srgb_against_reference_matrix() {
    let reference = [[1.3982, -0.3982, 0.0], [0.0, 1.0, 0.0], [0.0, -0.0429, 1.0429]];
    let m = adobe_to_srgb_matrix();
    for r in 0..3 {
        for c in 0..3 {
            assert!((m[r][c] - reference[r][c]).abs() < 2e-3, "{m:?}");
        }
    }
    let img = LinearImage::new(2, 1, vec![0.5, 0.5, 0.5, 0.0, 1.0, 0.0]).unwrap();
    let out = adobe_linear_to_srgb_linear(&img);
    for v in &out.image.data()[..3] {
        assert!((v - 0.5).abs() < 1e-9);
    }
    // Saturated Adobe green leaves the sRGB gamut in red and blue.
    assert_eq!(out.clipped, 2);
}

#[test]
fn grayscale_is_channel_mean() {
    let img = common::textured(3, 17, 11, 0.0, 2.0);
    let g = to_grayscale(&img);
    for y in 0..11 {
        for x in 0..17 {
            let [r, gg, b] = img.pixel(x, y);
            assert_eq!(g.get(x, y), (r + gg + b) / 3.0);
        }
    }
}

#[test]
fn blur_preserves_constants_and_composes() {
    let c = LinearImage::filled(20, 13, [0.3, 0.6, 0.9]).unwrap();
    let b = gaussian_blur(&c, 2.5).unwrap();
    assert!(b.data().iter().zip(c.data()).all(|(a, e)| (a - e).abs() < 1e-12));

    // Two blurs equal one blur with the quadrature sum of sigmas, away from
    // the borders.
    let (w, h) = (96, 96);
    let mut r = common::rng(11);
    let img = GrayImage::from_fn(w, h, |_, _| r.gen_range(0.0..1.0)).unwrap();
    let twice = gaussian_blur_gray(&gaussian_blur_gray(&img, 2.0).unwrap(), 3.0).unwrap();
    let once = gaussian_blur_gray(&img, 13f64.sqrt()).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for y in 24..h - 24 {
        for x in 24..w - 24 {
            let (a, b) = (twice.get(x, y), once.get(x, y));
            num += (a - b) * (a - b);
            den += (b - 0.5) * (b - 0.5);
        }
    }
    assert!((num / den).sqrt() < 0.02, "{}", (num / den).sqrt());
}

#[test]
fn masked_blur_ignores_outside_pixels() {
    let (w, h) = (30, 20);
    let mask = PixelMask::from_fn(w, h, |x, _| x < 15);
    let a = LinearImage::from_fn(w, h, |x, _| if x < 15 { [0.4, 0.2, 0.1] } else { [5.0, 5.0, 5.0] }).unwrap();
    let out = masked_gaussian_blur(&a, &mask, 4.0).unwrap();
    for y in 0..h {
        for x in 0..w {
            let p = out.pixel(x, y);
            if x < 15 {
                assert!((p[0] - 0.4).abs() < 1e-12 && (p[2] - 0.1).abs() < 1e-12);
            } else {
                assert_eq!(p, [0.0; 3]);
            }
        }
    }
}

/// Random convex polygon: sorted angles around a center.
fn convex(r: &mut impl Rng, w: f64, h: f64) -> Vec<[f64; 2]> {
    let n = r.gen_range(3..9);
    let (cx, cy) = (r.gen_range(0.2 * w..0.8 * w), r.gen_range(0.2 * h..0.8 * h));
    let rad = r.gen_range(2.0..0.6 * w.min(h));
    let mut ang: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..std::f64::consts::TAU)).collect();
    ang.sort_by(f64::total_cmp);
    ang.iter().map(|a| [cx + rad * a.cos(), cy + rad * a.sin()]).collect()
}

/// Point strictly on the left of every counter-clockwise edge.
fn inside_convex(v: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = v.len();
    let sign = |i: usize| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    };
    (0..n).all(|i| sign(i) > 0.0) || (0..n).all(|i| sign(i) < 0.0)
}

#[test]
fn raster_matches_point_in_convex_polygon() {
    let mut r = common::rng(5);
    let (w, h) = (40, 30);
    for _ in 0..300 {
        let v = convex(&mut r, w as f64, h as f64);
        let m = rasterize_polygons(&[Polygon::new(v.clone()).unwrap()], w, h).unwrap();
        for y in 0..h {
            for x in 0..w {
                let want = inside_convex(&v, [x as f64 + 0.5, y as f64 + 0.5]);
                assert_eq!(m.get(x, y), want, "{v:?} at ({x},{y})");
            }
        }
        let mut rotated = v.clone();
        rotated.rotate_left(1);
        let mut reversed = v.clone();
        reversed.reverse();
        for alt in [rotated, reversed] {
            assert_eq!(rasterize_polygons(&[Polygon::new(alt).unwrap()], w, h).unwrap(), m);
        }
    }
}

#[test]
fn overlapping_polygons_union() {
    let a = Polygon::rect(0.0, 0.0, 6.0, 4.0);
    let b = Polygon::rect(3.0, 2.0, 9.0, 7.0);
    let m = rasterize_polygons(&[a.clone(), b.clone()], 10, 8).unwrap();
    assert_eq!(m.count(), 24 + 30 - 6);
    assert!(rasterize_polygons(&[a], 0, 8).is_err());
}

#[test]
fn rect_tie_break_prefers_top_left() {
    let mut m = PixelMask::empty(12, 12);
    for (x0, y0) in [(7, 1), (1, 7), (1, 1)] {
        for y in y0..y0 + 3 {
            for x in x0..x0 + 3 {
                m.set(x, y, true);
            }
        }
    }
    assert_eq!(largest_inscribed_rect(&m), Some(Rect::new(1, 1, 3, 3)));
    assert_eq!(largest_inscribed_rect(&PixelMask::empty(4, 4)), None);
}

#[test]
fn rect_matches_brute_force() {
    let mut r = common::rng(77);
    for _ in 0..150 {
        let m = common::random_mask(&mut r, 18);
        let got = largest_inscribed_rect(&m);
        assert_eq!(got.map_or(0, |g| g.area()), common::brute_force_rect_area(&m));
        if let Some(g) = got {
            for y in g.y0..g.y0 + g.h {
                for x in g.x0..g.x0 + g.w {
                    assert!(m.get(x, y));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ciede2000_is_symmetric_and_zero_on_identity(
        l1 in 0.0f64..100.0, a1 in -100.0f64..100.0, b1 in -100.0f64..100.0,
        l2 in 0.0f64..100.0, a2 in -100.0f64..100.0, b2 in -100.0f64..100.0,
    ) {
        let (p, q) = (Lab::new(l1, a1, b1), Lab::new(l2, a2, b2));
        let (d1, d2) = (ciede2000(p, q), ciede2000(q, p));
        prop_assert!(d1 >= 0.0 && d1.is_finite());
        prop_assert!((d1 - d2).abs() < 1e-9);
        prop_assert!(ciede2000(p, p).abs() < 1e-12);
    }

    #[test]
    fn srgb_transfer_round_trips(v in 0.0f64..1.0) {
        prop_assert!((srgb_decode_value(srgb_encode_value(v)) - v).abs() < 1e-12);
        prop_assert!((srgb_encode_value(srgb_decode_value(v)) - v).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn srgb_image_round_trips(seed in 0u64..1000, w in 1usize..20, h in 1usize..20) {
        let img = common::textured(seed, w, h, 0.0, 1.0);
        let back = srgb_decode(&srgb_encode(&img)).unwrap();
        for (a, b) in back.data().iter().zip(img.data()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_window_is_a_crop(
        seed in 0u64..1000,
        (w, h) in (1usize..12, 1usize..12),
        (nw, nh) in (1usize..30, 1usize..30),
        corner in (0.0f64..1.0, 0.0f64..1.0),
        size in (0.0f64..1.0, 0.0f64..1.0),
    ) {
        let img = common::textured(seed, w, h, 0.0, 1.0);
        let x0 = ((nw - 1) as f64 * corner.0) as usize;
        let y0 = ((nh - 1) as f64 * corner.1) as usize;
        let rw = 1 + ((nw - x0 - 1) as f64 * size.0) as usize;
        let rh = 1 + ((nh - y0 - 1) as f64 * size.1) as usize;
        let rect = Rect::new(x0, y0, rw, rh);
        let full = resample_bilinear(&img, nw, nh).unwrap();
        prop_assert_eq!(resample_bilinear_window(&img, nw, nh, rect).unwrap(), full.crop(rect).unwrap());
        prop_assert!(resample_bilinear_window(&img, nw, nh, Rect::new(x0, y0, nw - x0 + 1, rh)).is_err());
    }
}
