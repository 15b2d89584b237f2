//! Weighted human disagreement rate on hand-made judgements.

use albedo_bench::dataset::{Judgement, JudgementPair};
use albedo_bench::imagecore::GrayImage;
use albedo_bench::metrics::{convert_judgement, whdr};

fn main() -> albedo_bench::Result<()> {
    // Left half 0.3, right half 0.6.
    let img = GrayImage::from_fn(8, 4, |x, _| if x < 4 { 0.3 } else { 0.6 })?;
    let pair = |p1: [f64; 2], p2: [f64; 2], label, weight| JudgementPair { p1, p2, label, weight };
    let judgements = [
        pair([0.1, 0.5], [0.9, 0.5], Judgement::FirstDarker, 1.0),
        pair([0.1, 0.2], [0.2, 0.8], Judgement::Equal, 0.8),
        pair([0.9, 0.5], [0.1, 0.5], Judgement::FirstDarker, 0.5),
    ];
    for j in &judgements {
        let ((x1, y1), (x2, y2)) = j.pixels(8, 4);
        let guess = convert_judgement(img.get(x1, y1), img.get(x2, y2), 0.1);
        println!("label {:?}, prediction says {:?}, weight {}", j.label, guess, j.weight);
    }
    for delta in [0.1, 1.5] {
        println!("WHDR at delta {delta}: {:.4}", whdr(&img, &judgements, delta)?);
    }
    Ok(())
}
