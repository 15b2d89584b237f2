//! Forward value of the fine-tuning objective for a few candidate albedos.

use albedo_bench::imagecore::to_grayscale;
use albedo_bench::metrics::{finetune_loss_forward, whdr, LossWeights, TextureParams};
use albedo_bench::perceptual::MsSsim;
use albedo_bench::synthkit::{corrupt_prediction, generate_scene, CorruptionKind};

fn main() -> albedo_bench::Result<()> {
    let scene = generate_scene(21, 320, 240, 5)?;
    let ctx = scene.context(&Default::default())?;
    let backend = MsSsim::default();
    let weights = LossWeights::default();
    println!("beta {} gamma {} tau {}", weights.beta, weights.gamma, weights.tau);
    for (name, kind, m) in [
        ("truth", CorruptionKind::Scale, 0.0),
        ("scaled", CorruptionKind::Scale, 1.0),
        ("contrast", CorruptionKind::Contrast, 0.5),
        ("blur", CorruptionKind::Blur, 3.0),
    ] {
        let pred = corrupt_prediction(&scene, kind, m)?.albedo;
        let b = finetune_loss_forward(
            &ctx.image,
            &pred,
            &ctx.regions,
            &ctx.judgements,
            &ctx.constant_shading,
            &backend,
            &TextureParams::default(),
            &weights,
        )?;
        let w = whdr(&to_grayscale(&pred), &ctx.judgements, 0.1)?;
        println!(
            "{name:<9} total {:.5}  si-MSE {:.2e}  hinge {:.5}  texture {:.4}  (whdr {w:.3})",
            b.total,
            b.si_mse,
            b.hinge.unwrap_or(0.0),
            b.texture.unwrap_or(0.0),
        );
    }
    Ok(())
}
