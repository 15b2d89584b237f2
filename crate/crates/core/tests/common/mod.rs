#![allow(dead_code)]

use std::path::PathBuf;

use albedo_bench::dataset::{Judgement, JudgementPair};
use albedo_bench::imagecore::{gaussian_blur, GrayImage, LinearImage, PixelMask};
use albedo_bench::metrics::RegionSample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth random texture with values roughly in [lo, hi].
pub fn textured(seed: u64, w: usize, h: usize, lo: f64, hi: f64) -> LinearImage {
    let mut r = rng(seed);
    let noise = LinearImage::from_fn(w, h, |_, _| {
        [r.gen_range(lo..hi), r.gen_range(lo..hi), r.gen_range(lo..hi)]
    })
    .unwrap();
    gaussian_blur(&noise, 0.8).unwrap()
}

pub fn random_judgements(r: &mut impl Rng, n: usize) -> Vec<JudgementPair> {
    (0..n)
        .map(|_| JudgementPair {
            p1: [r.gen_range(0.0..1.0), r.gen_range(0.0..1.0)],
            p2: [r.gen_range(0.0..1.0), r.gen_range(0.0..1.0)],
            label: [Judgement::Equal, Judgement::FirstDarker, Judgement::SecondDarker][r.gen_range(0..3)],
            weight: r.gen_range(0.1..2.0),
        })
        .collect()
}

/// Straight transcription of the weighted disagreement rate, one pair at a
/// time, with no shared helpers from the library.
pub fn naive_whdr(img: &GrayImage, judgements: &[JudgementPair], delta: f64) -> Option<f64> {
    let (w, h) = img.dims();
    let px = |p: [f64; 2]| {
        let mut x = (p[0] * w as f64).floor() as i64;
        let mut y = (p[1] * h as f64).floor() as i64;
        if x < 0 {
            x = 0;
        }
        if y < 0 {
            y = 0;
        }
        if x > w as i64 - 1 {
            x = w as i64 - 1;
        }
        if y > h as i64 - 1 {
            y = h as i64 - 1;
        }
        img.data()[y as usize * w + x as usize]
    };
    let mut num = 0.0;
    let mut den = 0.0;
    for j in judgements {
        let mut r1 = px(j.p1);
        let mut r2 = px(j.p2);
        if r1 < 1e-8 {
            r1 = 1e-8;
        }
        if r2 < 1e-8 {
            r2 = 1e-8;
        }
        let guess = if r2 / r1 > 1.0 + delta {
            "1"
        } else if r1 / r2 > 1.0 + delta {
            "2"
        } else {
            "E"
        };
        let label = match j.label {
            Judgement::Equal => "E",
            Judgement::FirstDarker => "1",
            Judgement::SecondDarker => "2",
        };
        den += j.weight;
        if guess != label {
            num += j.weight;
        }
    }
    (den > 0.0).then(|| num / den)
}

/// Largest all-true axis-aligned rectangle area by checking every corner
/// pair against a summed-area table.
pub fn brute_force_rect_area(mask: &PixelMask) -> usize {
    let (w, h) = mask.dims();
    let mut sat = vec![0usize; (w + 1) * (h + 1)];
    for y in 0..h {
        for x in 0..w {
            sat[(y + 1) * (w + 1) + x + 1] = mask.get(x, y) as usize + sat[y * (w + 1) + x + 1]
                + sat[(y + 1) * (w + 1) + x]
                - sat[y * (w + 1) + x];
        }
    }
    let count = |x0: usize, y0: usize, x1: usize, y1: usize| {
        sat[y1 * (w + 1) + x1] + sat[y0 * (w + 1) + x0] - sat[y0 * (w + 1) + x1] - sat[y1 * (w + 1) + x0]
    };
    let mut best = 0;
    for y0 in 0..h {
        for y1 in y0 + 1..=h {
            for x0 in 0..w {
                for x1 in x0 + 1..=w {
                    let area = (x1 - x0) * (y1 - y0);
                    if area > best && count(x0, y0, x1, y1) == area {
                        best = area;
                    }
                }
            }
        }
    }
    best
}

/// Random mask made of a few filled blobs and sprinkled holes.
pub fn random_mask(r: &mut impl Rng, max_side: usize) -> PixelMask {
    let w = r.gen_range(1..=max_side);
    let h = r.gen_range(1..=max_side);
    let mut m = PixelMask::empty(w, h);
    for _ in 0..r.gen_range(1..5) {
        let (x0, y0) = (r.gen_range(0..w), r.gen_range(0..h));
        let (x1, y1) = (r.gen_range(x0..w) + 1, r.gen_range(y0..h) + 1);
        for y in y0..y1 {
            for x in x0..x1 {
                m.set(x, y, true);
            }
        }
    }
    let holes = r.gen_range(0..=(w * h) / 8);
    for _ in 0..holes {
        m.set(r.gen_range(0..w), r.gen_range(0..h), false);
    }
    m
}

/// θ minimizing `Σ n (V − θG)²` over a uniform grid on [0, 3].
pub fn grid_theta(regions: &[RegionSample], step: f64) -> f64 {
    let gray = |p: [f64; 3]| (p[0] + p[1] + p[2]) / 3.0;
    let steps = (3.0 / step).round() as usize;
    let mut best = (f64::MAX, 0.0);
    for i in 0..=steps {
        let t = i as f64 * step;
        let e: f64 = regions
            .iter()
            .map(|r| {
                let d = gray(r.pred) - t * gray(r.gt);
                r.pixels as f64 * d * d
            })
            .sum();
        if e < best.0 {
            best = (e, t);
        }
    }
    best.1
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
