//! Derives sparse ground-truth shading from measured regions and scores two
//! shading predictions against it.

use albedo_bench::dataset::{paint_albedo, union_mask};
use albedo_bench::imagecore::gaussian_blur;
use albedo_bench::measure::derive_shading;
use albedo_bench::metrics::{sparse_shading_si_mse, ScaleTarget};
use albedo_bench::synthkit::generate_scene;

fn main() -> albedo_bench::Result<()> {
    let scene = generate_scene(3, 320, 240, 6)?;
    let ctx = scene.context(&Default::default())?;
    let (w, h) = (scene.width(), scene.height());
    let sparse = union_mask(&ctx.regions, w, h);
    let gt = derive_shading(&scene.image, &paint_albedo(&ctx.regions, w, h), &sparse, 8.0)?;
    println!("shading known on {} of {} pixels", gt.support.count(), w * h);

    // Scaled truth costs nothing; a flattened estimate does.
    let scaled = scene.shading.scaled(0.6)?;
    let flat = gaussian_blur(&scene.shading, 40.0)?;
    for (name, pred) in [("scaled truth", &scaled), ("over-smoothed", &flat)] {
        let r = sparse_shading_si_mse(&gt, pred, ScaleTarget::Pred)?;
        println!("{name:<14} si-MSE {:.3e} (fitted scale {:.3})", r.value, r.scale);
    }
    Ok(())
}
