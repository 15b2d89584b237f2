//! Texture error on constant-shading areas for increasingly blurred albedo,
//! with the rectangles it was measured on.

use albedo_bench::imagecore::gaussian_blur;
use albedo_bench::metrics::{texture_error, TextureParams};
use albedo_bench::perceptual::{MsSsim, PerceptualDistance};
use albedo_bench::synthkit::generate_scene;

fn main() -> albedo_bench::Result<()> {
    let scene = generate_scene(12, 512, 384, 6)?;
    let backend = MsSsim::default();
    let params = TextureParams::default();
    println!("backend {}", backend.id());
    for sigma in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let pred = if sigma == 0.0 {
            scene.albedo.clone()
        } else {
            gaussian_blur(&scene.albedo, sigma)?
        };
        let r = texture_error(&scene.image, &pred, &scene.constant_shading_polygons, &backend, &params)?;
        println!("blur {sigma:>3}: texture error {:.4} over {} rectangle(s)", r.value, r.rectangles.len());
        if sigma == 0.0 {
            for rect in &r.rectangles {
                println!("  {}x{} at ({}, {}) in the upsampled frame", rect.w, rect.h, rect.x0, rect.y0);
            }
        }
    }
    Ok(())
}
