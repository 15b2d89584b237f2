//! Loads a manifest and lists every problem found, or a summary.
//!
//! cargo run --example validate_manifest -- path/to/manifest.json

use std::path::Path;

use albedo_bench::dataset::{load_manifest, resolve_region_masks};
use albedo_bench::imagecore::image_dimensions;
use albedo_bench::Error;

fn main() {
    let Some(path) = std::env::args().nth(1) else {
        eprintln!("usage: validate_manifest <manifest.json>");
        std::process::exit(1);
    };
    let m = match load_manifest(Path::new(&path)) {
        Ok(m) => m,
        Err(Error::Validation(errs)) => {
            for e in errs {
                eprintln!("  {e}");
            }
            std::process::exit(2);
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("sha256 {}", m.content_hash);
    for (scene, img) in m.images() {
        let (w, h) = image_dimensions(&m.resolve(&img.file)).expect("validated");
        let regions = resolve_region_masks(img, &scene.measurements, &m.base_dir, w, h).expect("validated");
        let px: usize = regions.iter().map(|r| r.pixel_count).sum();
        println!(
            "{}/{}: {w}x{h}, {} regions over {px} px, {} judgements, {} constant-shading polygons",
            scene.scene_id,
            img.image_id,
            regions.len(),
            img.judgements.len(),
            img.constant_shading_polygons.len()
        );
    }
}
