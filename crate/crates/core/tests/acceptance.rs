//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every line is printed and the process exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use albedo_bench::config::RunConfig;
use albedo_bench::dataset::{load_manifest, JudgementPair, PredictionSet};
use albedo_bench::imagecore::{
    ciede2000, largest_inscribed_rect, masked_gaussian_blur, GrayImage, Lab, LinearImage, PixelMask, Polygon,
};
use albedo_bench::measure::{measure_region_albedo, ShadingGT};
use albedo_bench::metrics::{
    chromaticity_error, evaluate_image, intensity_si_mse, sparse_shading_si_mse, texture_error, whdr, ImageMetrics,
    MetricKind, MetricVector, RegionSample, ScaleTarget, TextureParams,
};
use albedo_bench::perceptual::MsSsim;
use albedo_bench::ranking::{relative_improvement_pair, Leaderboard};
use albedo_bench::report::{evaluate_sets, BackendInfo, MetricTable};
use albedo_bench::synthkit::{corrupt_prediction, generate_corpus, write_dataset, write_prediction_set, CorruptionKind};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1 -----------------------------------------------------------------------

fn published_relative_improvement() -> Outcome {
    let t = Instant::now();
    let path = fixture("published_scores.json");
    let table = MetricTable::load(&path).map_err(err)?;
    let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(err)?).map_err(err)?;
    let printed: BTreeMap<String, f64> =
        serde_json::from_value(raw["printed_relative_improvement"].clone()).map_err(err)?;

    let lb = Leaderboard::build(&table.rows, &MetricKind::ALBEDO, None).map_err(err)?;
    ensure(lb.entries.len() == 9, || format!("{} ranked, want 9", lb.entries.len()))?;
    let mut misses = Vec::new();
    for (name, want) in &printed {
        let got = lb.get(name).ok_or_else(|| format!("'{name}' not ranked"))?.relative_improvement;
        if (got - want).abs() > 3.0 {
            misses.push(format!("{name}: computed {got:+.1}, printed {want:+.1}"));
        }
    }
    let e = budget(t, Duration::from_secs(1))?;
    ensure(misses.is_empty(), || {
        format!("{}/9 outside ±3.0: {}", misses.len(), misses.join("; "))
    })?;
    Ok(format!("9/9 within ±3.0 points in {e:.2?}"))
}

// 2 -----------------------------------------------------------------------

const SHARMA_PAIRS: [(f64, f64, f64, f64, f64, f64, f64); 34] = [
    (50.0, 2.6772, -79.7751, 50.0, 0.0, -82.7485, 2.0425),
    (50.0, 3.1571, -77.2803, 50.0, 0.0, -82.7485, 2.8615),
    (50.0, 2.8361, -74.0200, 50.0, 0.0, -82.7485, 3.4412),
    (50.0, -1.3802, -84.2814, 50.0, 0.0, -82.7485, 1.0000),
    (50.0, -1.1848, -84.8006, 50.0, 0.0, -82.7485, 1.0000),
    (50.0, -0.9009, -85.5211, 50.0, 0.0, -82.7485, 1.0000),
    (50.0, 0.0, 0.0, 50.0, -1.0, 2.0, 2.3669),
    (50.0, -1.0, 2.0, 50.0, 0.0, 0.0, 2.3669),
    (50.0, 2.49, -0.001, 50.0, -2.49, 0.0009, 7.1792),
    (50.0, 2.49, -0.001, 50.0, -2.49, 0.001, 7.1792),
    (50.0, 2.49, -0.001, 50.0, -2.49, 0.0011, 7.2195),
    (50.0, 2.49, -0.001, 50.0, -2.49, 0.0012, 7.2195),
    (50.0, -0.001, 2.49, 50.0, 0.0009, -2.49, 4.8045),
    (50.0, -0.001, 2.49, 50.0, 0.001, -2.49, 4.8045),
    (50.0, -0.001, 2.49, 50.0, 0.0011, -2.49, 4.7461),
    (50.0, 2.5, 0.0, 50.0, 0.0, -2.5, 4.3065),
    (50.0, 2.5, 0.0, 73.0, 25.0, -18.0, 27.1492),
    (50.0, 2.5, 0.0, 61.0, -5.0, 29.0, 22.8977),
    (50.0, 2.5, 0.0, 56.0, -27.0, -3.0, 31.9030),
    (50.0, 2.5, 0.0, 58.0, 24.0, 15.0, 19.4535),
    (50.0, 2.5, 0.0, 50.0, 3.1736, 0.5854, 1.0000),
    (50.0, 2.5, 0.0, 50.0, 3.2972, 0.0, 1.0000),
    (50.0, 2.5, 0.0, 50.0, 1.8634, 0.5757, 1.0000),
    (50.0, 2.5, 0.0, 50.0, 3.2592, 0.3350, 1.0000),
    (60.2574, -34.0099, 36.2677, 60.4626, -34.1751, 39.4387, 1.2644),
    (63.0109, -31.0961, -5.8663, 62.8187, -29.7946, -4.0864, 1.2630),
    (61.2901, 3.7196, -5.3901, 61.4292, 2.2480, -4.9620, 1.8731),
    (35.0831, -44.1164, 3.7933, 35.0232, -40.0716, 1.5901, 1.8645),
    (22.7233, 20.0904, -46.6940, 23.0331, 14.9730, -42.5619, 2.0373),
    (36.4612, 47.8580, 18.3852, 36.2715, 50.5065, 21.2231, 1.4146),
    (90.8027, -2.0831, 1.4410, 91.1528, -1.6435, 0.0447, 1.4441),
    (90.9257, -0.5406, -0.9208, 88.6381, -0.8985, -0.7239, 1.5381),
    (6.7747, -0.2908, -2.4247, 5.8714, -0.0985, -2.2286, 0.6377),
    (2.0776, 0.0795, -1.1350, 0.9033, -0.0636, -0.5514, 0.9082),
];

fn ciede2000_pairs() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for (i, &(l1, a1, b1, l2, a2, b2, want)) in SHARMA_PAIRS.iter().enumerate() {
        let fwd = ciede2000(Lab::new(l1, a1, b1), Lab::new(l2, a2, b2));
        let back = ciede2000(Lab::new(l2, a2, b2), Lab::new(l1, a1, b1));
        for got in [fwd, back] {
            worst = worst.max((got - want).abs());
            ensure((got - want).abs() <= 1e-3, || format!("pair {}: {got:.5} vs {want}", i + 1))?;
        }
    }
    let e = budget(t, Duration::from_secs(1))?;
    Ok(format!("34/34 pairs, both orders, max error {worst:.1e} in {e:.2?}"))
}

// 3 -----------------------------------------------------------------------

const CASES: u32 = 500;

fn runner() -> TestRunner {
    TestRunner::new(PropConfig {
        cases: CASES,
        failure_persistence: None,
        ..PropConfig::default()
    })
}

fn log_scale() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn regions_strategy() -> impl Strategy<Value = Vec<RegionSample>> {
    prop::collection::vec(
        (
            prop::array::uniform3(0.01f64..1.0),
            prop::array::uniform3(0.01f64..1.0),
            1usize..2000,
        )
            .prop_map(|(pred, gt, pixels)| RegionSample { pred, gt, pixels }),
        1..8,
    )
}

fn scaled(regions: &[RegionSample], cv: f64, cg: f64) -> Vec<RegionSample> {
    regions
        .iter()
        .map(|r| RegionSample {
            pred: r.pred.map(|v| v * cv),
            gt: r.gt.map(|v| v * cg),
            pixels: r.pixels,
        })
        .collect()
}

fn check_close(name: &str, a: f64, b: f64, tol: f64) -> Result<(), TestCaseError> {
    if close(a, b, tol) {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{name}: {a} vs {b}")))
    }
}

fn prop_whdr_scale() -> Result<(), String> {
    let strat = (
        prop::collection::vec(0.01f64..1.0, 16 * 12),
        any::<u64>(),
        log_scale(),
    );
    runner()
        .run(&strat, |(data, seed, c)| {
            let img = GrayImage::new(16, 12, data).unwrap();
            let js = random_judgements(&mut rng(seed), 25);
            let a = whdr(&img, &js, 0.1).unwrap();
            let b = whdr(&img.scaled(c), &js, 0.1).unwrap();
            check_close("whdr", a, b, 1e-8)
        })
        .map_err(err)
}

fn prop_intensity_gt_scale() -> Result<(), String> {
    runner()
        .run(&(regions_strategy(), log_scale()), |(rs, c)| {
            let a = intensity_si_mse(&rs, ScaleTarget::Gt).unwrap().value;
            let b = intensity_si_mse(&scaled(&rs, 1.0, c), ScaleTarget::Gt).unwrap().value;
            check_close("intensity", a, b, 1e-8)
        })
        .map_err(err)
}

fn prop_intensity_c2_law() -> Result<(), String> {
    runner()
        .run(&(regions_strategy(), log_scale()), |(rs, c)| {
            let a = intensity_si_mse(&rs, ScaleTarget::Gt).unwrap().value;
            let b = intensity_si_mse(&scaled(&rs, c, 1.0), ScaleTarget::Gt).unwrap().value;
            check_close("intensity c²", b, c * c * a, 1e-8)
        })
        .map_err(err)
}

fn prop_chroma_gt_scale() -> Result<(), String> {
    runner()
        .run(&(regions_strategy(), log_scale()), |(rs, c)| {
            let a = chromaticity_error(&rs).unwrap().value;
            let b = chromaticity_error(&scaled(&rs, 1.0, c)).unwrap().value;
            check_close("chroma(V, cG)", a, b, 1e-3)
        })
        .map_err(err)
}

fn prop_chroma_pred_scale() -> Result<(), String> {
    runner()
        .run(&(regions_strategy(), log_scale()), |(rs, c)| {
            let a = chromaticity_error(&rs).unwrap().value;
            let b = chromaticity_error(&scaled(&rs, c, 1.0)).unwrap().value;
            check_close("chroma(cV, G)", a, b, 1e-3)
        })
        .map_err(err)
}

fn prop_texture_per_crop_constant() -> Result<(), String> {
    let (w, h) = (80, 40);
    let polys = [Polygon::rect(2.0, 2.0, 36.0, 36.0), Polygon::rect(44.0, 2.0, 78.0, 36.0)];
    let params = TextureParams::default();
    let backend = MsSsim::default();
    let strat = (
        any::<u64>(),
        prop::array::uniform3(0.05f64..20.0),
        prop::array::uniform3(0.05f64..20.0),
    );
    runner()
        .run(&strat, |(seed, k1, k2)| {
            let image = textured(seed, w, h, 0.05, 0.9);
            let pred = textured(seed ^ 0x5eed, w, h, 0.05, 0.9);
            let rescaled = LinearImage::from_fn(w, h, |x, y| {
                let p = pred.pixel(x, y);
                let k = if x < w / 2 { k1 } else { k2 };
                [p[0] * k[0], p[1] * k[1], p[2] * k[2]]
            })
            .unwrap();
            let a = texture_error(&image, &pred, &polys, &backend, &params).unwrap();
            let b = texture_error(&image, &rescaled, &polys, &backend, &params).unwrap();
            prop_assert_eq!(a.rectangles.len(), 2);
            check_close("texture", a.value, b.value, 1e-8)
        })
        .map_err(err)
}

fn prop_shading_pred_scale() -> Result<(), String> {
    let (w, h) = (24, 20);
    let strat = (any::<u64>(), 0.5f64..3.0, log_scale());
    runner()
        .run(&strat, |(seed, sigma, c)| {
            let mut r = rng(seed);
            let support = PixelMask::from_fn(w, h, |_, _| r.gen_bool(0.7));
            let raw = textured(seed, w, h, 0.2, 1.5);
            let gt = ShadingGT {
                shading: masked_gaussian_blur(&raw, &support, sigma).unwrap(),
                mask: support.clone(),
                support,
                sigma,
            };
            let pred = textured(seed.wrapping_add(1), w, h, 0.2, 1.5);
            let a = sparse_shading_si_mse(&gt, &pred, ScaleTarget::Pred).unwrap().value;
            let b = sparse_shading_si_mse(&gt, &pred.scaled(c).unwrap(), ScaleTarget::Pred).unwrap().value;
            check_close("shading", a, b, 1e-8)
        })
        .map_err(err)
}

fn prop_relative_improvement() -> Result<(), String> {
    let strat = (0.01f64..100.0, 0.01f64..100.0, log_scale());
    runner()
        .run(&strat, |(a, b, c)| {
            let r_ab = relative_improvement_pair(a, b).unwrap();
            let r_ba = relative_improvement_pair(b, a).unwrap();
            check_close("antisymmetry", r_ab, -r_ba, 1e-8)?;
            let r_c = relative_improvement_pair(c * a, c * b).unwrap();
            check_close("rescale", r_ab, r_c, 1e-8)
        })
        .map_err(err)
}

fn invariance_suite() -> Outcome {
    let props: [(&str, fn() -> Result<(), String>); 8] = [
        ("WHDR scale", prop_whdr_scale),
        ("intensity GT scale", prop_intensity_gt_scale),
        ("intensity c² law", prop_intensity_c2_law),
        ("chromaticity GT scale", prop_chroma_gt_scale),
        ("chromaticity prediction scale", prop_chroma_pred_scale),
        ("texture per-crop constant", prop_texture_per_crop_constant),
        ("shading prediction scale", prop_shading_pred_scale),
        ("R antisymmetry and rescale", prop_relative_improvement),
    ];
    let mut failed = Vec::new();
    for (name, f) in &props {
        match f() {
            Ok(()) => println!("      ok    {name} ({CASES} cases)"),
            Err(e) => {
                let first = e.lines().next().unwrap_or_default().to_string();
                println!("      FAIL  {name}: {first}");
                failed.push(*name);
            }
        }
    }
    ensure(failed.is_empty(), || format!("{} propert(ies) failed: {}", failed.len(), failed.join(", ")))?;
    Ok(format!("8 properties x {CASES} cases"))
}

// 4 -----------------------------------------------------------------------

fn oracle_equivalence() -> Outcome {
    let mut r = rng(4);
    for i in 0..100 {
        let theta0: f64 = r.gen_range(0.3..2.5);
        let n = r.gen_range(1..8);
        let regions: Vec<RegionSample> = (0..n)
            .map(|_| {
                let gt = [r.gen_range(0.05..1.0), r.gen_range(0.05..1.0), r.gen_range(0.05..1.0)];
                RegionSample {
                    pred: gt.map(|g: f64| (theta0 * g + r.gen_range(-0.05..0.05)).max(0.0)),
                    gt,
                    pixels: r.gen_range(1..500),
                }
            })
            .collect();
        let closed = intensity_si_mse(&regions, ScaleTarget::Gt).map_err(err)?.scale;
        let grid = grid_theta(&regions, 1e-4);
        ensure((closed - grid).abs() <= 1e-4, || format!("instance {i}: θ̂ {closed} vs grid {grid}"))?;
    }

    for i in 0..200 {
        let m = random_mask(&mut r, 64);
        let want = brute_force_rect_area(&m);
        let got = largest_inscribed_rect(&m);
        let area = got.map_or(0, |rc| rc.area());
        ensure(area == want, || format!("mask {i} {:?}: area {area} vs brute force {want}", m.dims()))?;
        if let Some(rc) = got {
            let inside = (rc.y0..rc.y0 + rc.h).all(|y| (rc.x0..rc.x0 + rc.w).all(|x| m.get(x, y)));
            ensure(inside, || format!("mask {i}: rectangle {rc:?} leaves the mask"))?;
        }
    }

    for i in 0..100 {
        let (w, h) = (r.gen_range(1..40), r.gen_range(1..40));
        let img = GrayImage::from_fn(w, h, |_, _| if r.gen_bool(0.05) { 0.0 } else { r.gen_range(0.0..1.0) }).unwrap();
        let n = r.gen_range(1..60);
        let js: Vec<JudgementPair> = random_judgements(&mut r, n);
        let delta = r.gen_range(0.01..0.5);
        let got = whdr(&img, &js, delta).map_err(err)?;
        let want = naive_whdr(&img, &js, delta).unwrap();
        ensure(got == want, || format!("set {i}: whdr {got} vs naive {want}"))?;
    }
    Ok("θ̂ 100/100 within 1e-4, rectangles 200/200 exact, WHDR 100/100 exact".into())
}

// 5 -----------------------------------------------------------------------

fn mean_of(metrics: &[ImageMetrics], kind: MetricKind) -> f64 {
    MetricVector::aggregate("x", metrics).get(kind).unwrap_or(f64::NAN)
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|p| p[1] > p[0])
}

fn end_to_end() -> Outcome {
    let t = Instant::now();
    let config = RunConfig {
        workers: 1,
        ..RunConfig::default()
    };
    let dir = tempfile::tempdir().map_err(err)?;
    let scenes = generate_corpus(20, 2024, 512, 384, 6).map_err(err)?;
    write_dataset(&scenes, dir.path()).map_err(err)?;
    let gt: Vec<_> = scenes.iter().map(|s| s.ground_truth()).collect();
    write_prediction_set(&dir.path().join("gt"), "ground-truth", &gt).map_err(err)?;

    let manifest = load_manifest(&dir.path().join("manifest.json")).map_err(err)?;
    let set = PredictionSet::load(&dir.path().join("gt")).map_err(err)?;
    let backend = MsSsim::default();
    let reports = evaluate_sets(
        &manifest,
        &[set],
        &config,
        BackendInfo {
            backend: &backend,
            fallback_warning: None,
        },
    )
    .map_err(err)?;
    let agg = &reports[0].aggregate;
    ensure(reports[0].images.len() == 20, || "not every image scored".into())?;
    let get = |k: MetricKind| agg.get(k).unwrap_or(f64::NAN);
    let (wh, int, chr, tex, sh) = (
        get(MetricKind::Whdr),
        get(MetricKind::Intensity),
        get(MetricKind::Chromaticity),
        get(MetricKind::Texture),
        get(MetricKind::Shading),
    );
    ensure(int < 1e-8, || format!("GT intensity {int:e}"))?;
    ensure(chr < 1e-3, || format!("GT chromaticity {chr:e}"))?;
    ensure(wh == 0.0, || format!("GT WHDR {wh}"))?;
    ensure(tex < 1e-3, || format!("GT texture {tex:e}"))?;
    ensure(sh < 1e-6, || format!("GT shading {sh:e}"))?;

    let mut worst_card: f64 = 0.0;
    for s in &scenes {
        for (i, region) in s.regions.iter().enumerate() {
            let cap = s.gray_card_capture(i).map_err(err)?;
            let got = measure_region_albedo(&cap).map_err(err)?.albedo;
            for c in 0..3 {
                worst_card = worst_card.max((got[c] - region.albedo[c]).abs());
            }
        }
    }
    ensure(worst_card < 1e-6, || format!("gray-card round trip off by {worst_card:e}"))?;

    let contexts = scenes.iter().map(|s| s.context(&config)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let ladder = |kind: CorruptionKind, mags: &[f64]| -> Result<Vec<Vec<ImageMetrics>>, String> {
        mags.iter()
            .map(|&m| {
                scenes
                    .iter()
                    .zip(&contexts)
                    .map(|(s, ctx)| {
                        let p = corrupt_prediction(s, kind, m).map_err(err)?;
                        Ok(evaluate_image(ctx, &p, &config, &backend))
                    })
                    .collect()
            })
            .collect()
    };
    let series = |runs: &[Vec<ImageMetrics>], k: MetricKind| runs.iter().map(|r| mean_of(r, k)).collect::<Vec<_>>();

    let tint = ladder(CorruptionKind::Tint, &[0.0, 0.05, 0.1, 0.2])?;
    let tint_chroma = series(&tint, MetricKind::Chromaticity);
    let tint_whdr = series(&tint, MetricKind::Whdr);
    ensure(strictly_increasing(&tint_chroma), || format!("tint chromaticity {tint_chroma:?}"))?;
    ensure(tint_whdr.iter().all(|v| *v == tint_whdr[0]), || format!("tint moved WHDR {tint_whdr:?}"))?;

    let contrast = ladder(CorruptionKind::Contrast, &[0.0, 0.1, 0.3, 0.6])?;
    let con_int = series(&contrast, MetricKind::Intensity);
    let con_chroma = series(&contrast, MetricKind::Chromaticity);
    ensure(strictly_increasing(&con_int), || format!("contrast intensity {con_int:?}"))?;
    ensure(con_chroma.iter().all(|v| *v < 0.5), || format!("contrast chromaticity {con_chroma:?}"))?;

    let blur = ladder(CorruptionKind::Blur, &[0.0, 1.0, 2.0, 4.0])?;
    let blur_tex = series(&blur, MetricKind::Texture);
    ensure(strictly_increasing(&blur_tex), || format!("blur texture {blur_tex:?}"))?;

    let e = budget(t, Duration::from_secs(60))?;
    Ok(format!(
        "GT: int {int:.1e} chroma {chr:.1e} whdr {wh} tex {tex:.1e} shading {sh:.1e}; card {worst_card:.1e}; \
         ladders tint {tint_chroma:.3?} contrast {con_int:.6?} blur {blur_tex:.3?}; {e:.1?}"
    ))
}

// 6 -----------------------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_albedo-bench"))
}

fn run_ok(cmd: &mut Command) -> Result<(), String> {
    let out = cmd.output().map_err(err)?;
    ensure(out.status.success(), || {
        format!("{:?} exited {:?}: {}", cmd, out.status.code(), String::from_utf8_lossy(&out.stderr))
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let d = dir.path();
    run_ok(bin().args(["synth", "--scenes", "6", "--seed", "77", "--corrupt", "tint=0.1,blur=2", "--out"]).arg(d))?;
    let evaluate = |out: &Path| {
        run_ok(
            bin()
                .arg("evaluate")
                .arg(d.join("manifest.json"))
                .arg(d.join("predictions/gt"))
                .arg(d.join("predictions/tint_0.1"))
                .arg(d.join("predictions/blur_2"))
                .arg("--csv")
                .arg("--workers")
                .arg("3")
                .arg("--out")
                .arg(out),
        )
    };
    let (a, b) = (d.join("run_a"), d.join("run_b"));
    evaluate(&a)?;
    evaluate(&b)?;
    let mut files: Vec<_> = std::fs::read_dir(&a).map_err(err)?.map(|e| e.unwrap().file_name()).collect();
    files.sort();
    ensure(files.len() == 6, || format!("expected 3 reports + 3 tables, got {files:?}"))?;
    for f in &files {
        let x = std::fs::read(a.join(f)).map_err(err)?;
        let y = std::fs::read(b.join(f)).map_err(err)?;
        ensure(x == y, || format!("{f:?} differs between runs"))?;
    }
    Ok(format!("{} files byte-identical across two runs", files.len()))
}

// 7 -----------------------------------------------------------------------

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let d = dir.path();
    let scenes = generate_corpus(100, 7, 512, 384, 6).map_err(err)?;
    write_dataset(&scenes, d).map_err(err)?;
    let mut dirs = Vec::new();
    for (name, kind, mag) in [
        ("gt", CorruptionKind::Scale, 0.0),
        ("tint", CorruptionKind::Tint, 0.1),
        ("blur", CorruptionKind::Blur, 2.0),
    ] {
        let preds = scenes
            .iter()
            .map(|s| corrupt_prediction(s, kind, mag))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        write_prediction_set(&d.join(name), name, &preds).map_err(err)?;
        dirs.push(d.join(name));
    }
    drop(scenes);

    let t = Instant::now();
    let config = RunConfig {
        workers: 4,
        ..RunConfig::default()
    };
    let manifest = load_manifest(&d.join("manifest.json")).map_err(err)?;
    let sets = dirs.iter().map(|p| PredictionSet::load(p)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let backend = MsSsim::default();
    let reports = evaluate_sets(
        &manifest,
        &sets,
        &config,
        BackendInfo {
            backend: &backend,
            fallback_warning: None,
        },
    )
    .map_err(err)?;
    ensure(reports.iter().all(|r| r.images.len() == 100), || "not every image scored".into())?;
    let e = budget(t, Duration::from_secs(60))?;
    Ok(format!("300 image evaluations in {e:.1?} with 4 workers"))
}

// -------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("published relative improvement", published_relative_improvement),
        ("CIEDE2000 verification pairs", ciede2000_pairs),
        ("metric invariance suite", invariance_suite),
        ("oracle equivalence", oracle_equivalence),
        ("end-to-end synthetic pipeline", end_to_end),
        ("report determinism", determinism),
        ("throughput", throughput),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {}. {name}: {detail} [{:.1?}]", i + 1, t.elapsed());
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
