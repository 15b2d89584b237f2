//! Color conversions and CIEDE2000 differences.

use albedo_bench::imagecore::{
    adobe_linear_to_srgb_linear, ciede2000, linear_srgb_to_lab, srgb_decode_value, srgb_encode_value, LinearImage,
};

fn main() -> albedo_bench::Result<()> {
    for v in [0.0, 0.0031308, 0.18, 0.5, 1.0] {
        let e = srgb_encode_value(v);
        println!("linear {v:<9} -> sRGB {e:.6} -> linear {:.9}", srgb_decode_value(e));
    }

    let gray = linear_srgb_to_lab([0.18; 3]);
    println!("18% gray in Lab: L {:.2} a {:.2} b {:.2}", gray.l, gray.a, gray.b);

    let neutral = [0.3, 0.3, 0.3];
    for (name, rgb) in [("slightly warm", [0.33, 0.3, 0.27]), ("red", [0.45, 0.15, 0.15]), ("darker", [0.2, 0.2, 0.2])] {
        let d = ciede2000(linear_srgb_to_lab(neutral), linear_srgb_to_lab(rgb));
        println!("dE00 neutral vs {name:<13} {d:.3}");
    }

    let adobe = LinearImage::new(3, 1, vec![0.5, 0.5, 0.5, 0.0, 1.0, 0.0, 0.9, 0.2, 0.1])?;
    let conv = adobe_linear_to_srgb_linear(&adobe);
    for (i, p) in conv.image.pixels().enumerate() {
        println!("Adobe {:?} -> sRGB [{:.4}, {:.4}, {:.4}]", adobe.pixel(i, 0), p[0], p[1], p[2]);
    }
    println!("{} channel value(s) clipped at the sRGB gamut", conv.clipped);
    Ok(())
}
