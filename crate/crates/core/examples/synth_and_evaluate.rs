//! Generates a small synthetic benchmark, writes it to disk with a few
//! corrupted prediction sets, evaluates them and prints the aggregates.
//!
//! cargo run --example synth_and_evaluate -- [out_dir]

use std::path::PathBuf;

use albedo_bench::config::RunConfig;
use albedo_bench::dataset::load_manifest;
use albedo_bench::perceptual::MsSsim;
use albedo_bench::report::{evaluate_sets, BackendInfo};
use albedo_bench::synthkit::{corrupt_prediction, generate_corpus, write_dataset, write_prediction_set, CorruptionKind};

fn main() -> albedo_bench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("albedo-bench-synth"));
    let scenes = generate_corpus(8, 2024, 320, 240, 5)?;
    write_dataset(&scenes, &out)?;

    let mut sets = Vec::new();
    for (name, kind, m) in [
        ("tint-0.1", CorruptionKind::Tint, 0.1),
        ("contrast-0.3", CorruptionKind::Contrast, 0.3),
        ("blur-2", CorruptionKind::Blur, 2.0),
    ] {
        let preds = scenes
            .iter()
            .map(|s| corrupt_prediction(s, kind, m))
            .collect::<albedo_bench::Result<Vec<_>>>()?;
        sets.push(write_prediction_set(&out.join("predictions").join(name), name, &preds)?);
    }

    let manifest = load_manifest(&out.join("manifest.json"))?;
    let backend = MsSsim::default();
    let reports = evaluate_sets(
        &manifest,
        &sets,
        &RunConfig::default(),
        BackendInfo {
            backend: &backend,
            fallback_warning: None,
        },
    )?;
    for r in &reports {
        let a = &r.aggregate;
        println!(
            "{:<14} whdr {:.4}  intensity {:.2e}  chroma {:.3}  texture {:.4}  shading {:.2e}",
            r.algorithm,
            a.whdr.unwrap_or(f64::NAN),
            a.intensity.unwrap_or(f64::NAN),
            a.chromaticity.unwrap_or(f64::NAN),
            a.texture.unwrap_or(f64::NAN),
            a.shading.unwrap_or(f64::NAN),
        );
    }

    println!("dataset in {}", out.display());
    Ok(())
}
